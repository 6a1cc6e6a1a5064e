"""Session state and the records a conversation leaves behind."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..rules.ast import Value


@dataclass(frozen=True)
class PromptPayload:
    """One prompt as put to the participant."""

    node_id: str
    title: str  # spoken script (or error prompt on a reprompt)
    descriptor: Optional[dict]  # widget description; None for voice only
    is_error_reprompt: bool = False

    def to_wire(self) -> dict:
        doc = {"kind": "voice_only"} if self.descriptor is None else dict(self.descriptor)
        doc["title"] = self.title
        doc["node"] = self.node_id
        return doc


@dataclass(frozen=True)
class ParticipantInput:
    kind: str  # "utterance" | "widget_event"
    value: object

    @staticmethod
    def from_wire(doc: dict) -> "ParticipantInput":
        kind = doc.get("kind")
        if kind not in ("utterance", "widget_event"):
            raise ValueError(f"input kind must be utterance or widget_event, got {kind!r}")
        if "value" not in doc:
            raise ValueError("input needs a value")
        value = doc["value"]
        if kind == "utterance" and not isinstance(value, str):
            raise ValueError("utterance value must be a string")
        if kind == "widget_event" and type(value) not in (str, int, float, bool):
            raise ValueError("widget_event value must be a scalar")
        return ParticipantInput(kind=kind, value=value)


@dataclass(frozen=True)
class ResponseRecord:
    """One submitted answer, valid or not. valid is true iff parsed is set."""

    node_id: str
    kind: str  # input kind
    raw: str  # raw value as text, always retained
    parsed: Value  # normalized answer; None when the attempt was invalid
    valid: bool
    attempt_index: int  # 1-based attempt number at this node
    ts: float

    def to_document(self) -> dict:
        return {
            "node": self.node_id,
            "kind": self.kind,
            "raw": self.raw,
            "parsed": self.parsed,
            "valid": self.valid,
            "attempt": self.attempt_index,
            "ts": self.ts,
        }

    @staticmethod
    def from_document(doc: dict) -> "ResponseRecord":
        parsed = doc["parsed"]
        return ResponseRecord(
            node_id=doc["node"],
            kind=doc["kind"],
            raw=doc["raw"],
            parsed=float(parsed) if type(parsed) in (int, float) else parsed,
            valid=doc["valid"],
            attempt_index=doc["attempt"],
            ts=doc["ts"],
        )


def response_record_json(record: ResponseRecord, participant: str, session_id: str) -> str:
    """One transcript line. Key-sorted and compact so every producer of
    transcript output emits identical bytes for identical records."""
    doc = record.to_document()
    doc["participant"] = participant
    doc["session"] = session_id
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


STATUS_ACTIVE = "active"
STATUS_COMPLETED = "completed"
STATUS_ABANDONED = "abandoned"


@dataclass
class Session:
    """A running (or finished) conversation over one topic."""

    id: str
    schema_id: str
    topic_id: str
    participant_id: str
    seed: int  # drives paraphrase draws; always set, random if not supplied
    status: str = STATUS_ACTIVE
    current_node: Optional[str] = None  # None once finished
    attempts_remaining: int = 0
    draws: int = 0  # paraphrase draws consumed so far
    records: list[ResponseRecord] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "id": self.id,
            "schema_id": self.schema_id,
            "topic_id": self.topic_id,
            "participant_id": self.participant_id,
            "seed": self.seed,
            "status": self.status,
            "current_node": self.current_node,
            "attempts_remaining": self.attempts_remaining,
            "draws": self.draws,
            "records": [r.to_document() for r in self.records],
        }

    @staticmethod
    def from_document(doc: dict) -> "Session":
        return Session(
            id=doc["id"],
            schema_id=doc["schema_id"],
            topic_id=doc["topic_id"],
            participant_id=doc["participant_id"],
            seed=doc["seed"],
            status=doc["status"],
            current_node=doc["current_node"],
            attempts_remaining=doc["attempts_remaining"],
            draws=doc["draws"],
            records=[ResponseRecord.from_document(r) for r in doc["records"]],
        )

"""Entity model for survey schema documents.

All entities are frozen dataclasses keyed by string ids. A SurveySchema
normalizes its collections to sorted-by-id order at construction, so two
schemas with the same entities compare equal regardless of authored order
and serialization is deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..rules.fetch import FetchDescriptor

SCHEMA_VERSION = "1"

ANSWER_KINDS = ("likert", "numeric", "choice", "free_text")
VISUAL_KINDS = ("buttons", "slider", "text_panel")

_HMS_RE = re.compile(r"^([01]\d|2[0-3]):([0-5]\d):([0-5]\d)$")


def parse_hms(text: str) -> Optional[int]:
    """Parse strict HH:MM:SS into seconds since midnight; None if invalid."""
    m = _HMS_RE.match(text)
    if m is None:
        return None
    h, mi, s = (int(g) for g in m.groups())
    return h * 3600 + mi * 60 + s


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    entity_id: str  # "document" for top-level findings
    message: str

    def rendered(self) -> str:
        return f"{self.severity} {self.code} {self.entity_id}: {self.message}"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diagnostics)


@dataclass(frozen=True)
class EmaTopic:
    id: str
    root_nodes: tuple[str, ...]  # authored order decides root precedence
    title: Optional[str] = None


@dataclass(frozen=True)
class EmaQuestionNode:
    id: str
    topic_id: str
    audio_output: str
    answer: str
    visual_output: Optional[str] = None
    schedule: Optional[str] = None


@dataclass(frozen=True)
class AudioOutput:
    id: str
    scripts: tuple[str, ...]  # paraphrase pool, one is drawn per prompt


@dataclass(frozen=True)
class ButtonSpec:
    label: str
    value: str


@dataclass(frozen=True)
class VisualOutput:
    id: str
    kind: str
    buttons: tuple[ButtonSpec, ...] = ()
    min: Optional[float] = None
    max: Optional[float] = None
    step: Optional[float] = None
    text: Optional[str] = None


@dataclass(frozen=True)
class AnswerSpec:
    id: str
    kind: str
    attempts_allowed: int
    validation_rule: Optional[str] = None
    error_prompts: tuple[str, ...] = ()
    synonym_map: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class QuestionCondition:
    id: str
    source: str
    target: str
    priority: int
    return_rule: str
    fetch: Optional[FetchDescriptor] = None


@dataclass(frozen=True)
class Schedule:
    id: str
    window_start: str  # "HH:MM:SS", start inclusive
    window_end: str  # "HH:MM:SS", end exclusive
    interval_s: int  # sliding-window length for the occurrence cap
    max_occurrences: int

    @property
    def start_s(self) -> int:
        value = parse_hms(self.window_start)
        if value is None:
            raise ValueError(f"bad window_start {self.window_start!r}")
        return value

    @property
    def end_s(self) -> int:
        value = parse_hms(self.window_end)
        if value is None:
            raise ValueError(f"bad window_end {self.window_end!r}")
        return value


def _sorted_by_id(items):
    return tuple(sorted(items, key=lambda e: e.id))


@dataclass(frozen=True)
class SurveySchema:
    schema_version: str
    topics: tuple[EmaTopic, ...] = ()
    nodes: tuple[EmaQuestionNode, ...] = ()
    audio_outputs: tuple[AudioOutput, ...] = ()
    visual_outputs: tuple[VisualOutput, ...] = ()
    answers: tuple[AnswerSpec, ...] = ()
    conditions: tuple[QuestionCondition, ...] = ()
    schedules: tuple[Schedule, ...] = ()

    def __post_init__(self):
        for name in (
            "topics",
            "nodes",
            "audio_outputs",
            "visual_outputs",
            "answers",
            "conditions",
            "schedules",
        ):
            object.__setattr__(self, name, _sorted_by_id(getattr(self, name)))

    # Lookup helpers; schemas are small so linear builds are fine.
    def topic(self, topic_id: str) -> Optional[EmaTopic]:
        return _find(self.topics, topic_id)

    def node(self, node_id: str) -> Optional[EmaQuestionNode]:
        return _find(self.nodes, node_id)

    def audio(self, audio_id: str) -> Optional[AudioOutput]:
        return _find(self.audio_outputs, audio_id)

    def visual(self, visual_id: str) -> Optional[VisualOutput]:
        return _find(self.visual_outputs, visual_id)

    def answer(self, answer_id: str) -> Optional[AnswerSpec]:
        return _find(self.answers, answer_id)

    def condition(self, condition_id: str) -> Optional[QuestionCondition]:
        return _find(self.conditions, condition_id)

    def schedule(self, schedule_id: str) -> Optional[Schedule]:
        return _find(self.schedules, schedule_id)

    def outgoing(self, node_id: str) -> tuple[QuestionCondition, ...]:
        """Conditions leaving node_id, ascending priority then id."""
        edges = [c for c in self.conditions if c.source == node_id]
        edges.sort(key=lambda c: (c.priority, c.id))
        return tuple(edges)


def _find(items, wanted_id):
    for item in items:
        if item.id == wanted_id:
            return item
    return None


def topic_graph(schema: SurveySchema, topic_id: str) -> dict:
    """Node/edge view of one topic, for graph rendering and path tools."""
    nodes = [n.id for n in schema.nodes if n.topic_id == topic_id]
    node_set = set(nodes)
    edges = [
        {"id": c.id, "source": c.source, "target": c.target, "priority": c.priority}
        for c in schema.conditions
        if c.source in node_set
    ]
    edges.sort(key=lambda e: (e["source"], e["priority"], e["id"]))
    topic = schema.topic(topic_id)
    return {
        "topic": topic_id,
        "roots": list(topic.root_nodes) if topic else [],
        "nodes": nodes,
        "edges": edges,
    }

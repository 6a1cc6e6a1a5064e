"""Durable file layout for the service.

    <root>/
      schemas/<id>.json      canonical schema documents, content-addressed
      participants.json      id -> {"utc_offset_minutes": n}
      sessions/<id>.json     one JSON document per session
      attempts.jsonl         append-only prompt log
      responses.jsonl        append-only response record log

Documents are written with an atomic temp-file-plus-rename; the two logs
are append-only with fsync before the caller proceeds, so a record that
was acknowledged is on disk even if the process dies immediately after.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from pathlib import Path
from typing import Iterator, Optional

from ..flow.session import Session
from ..scheduling import AttemptLog

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]{1,128}$")


def safe_id(value: str) -> bool:
    """Whether value may be used inside a file name."""
    return bool(_ID_RE.match(value))


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def _append_lines(path: Path, lines: list[str]) -> None:
    with open(path, "a", encoding="utf-8") as f:
        for line in lines:
            f.write(line + "\n")
        f.flush()
        os.fsync(f.fileno())


class Store:
    def __init__(self, root) -> None:
        self.root = Path(root)
        self.schemas_dir = self.root / "schemas"
        self.sessions_dir = self.root / "sessions"
        self.participants_path = self.root / "participants.json"
        self.attempts_path = self.root / "attempts.jsonl"
        self.responses_path = self.root / "responses.jsonl"
        self.schemas_dir.mkdir(parents=True, exist_ok=True)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)

    # -- schemas ---------------------------------------------------------

    def save_schema(self, canonical_text: str) -> str:
        """Store canonical schema text under its content hash."""
        schema_id = hashlib.sha256(canonical_text.encode("utf-8")).hexdigest()[:16]
        path = self.schemas_dir / f"{schema_id}.json"
        if not path.exists():
            _atomic_write(path, canonical_text)
        return schema_id

    def load_schema_text(self, schema_id: str) -> Optional[str]:
        if not safe_id(schema_id):
            return None
        path = self.schemas_dir / f"{schema_id}.json"
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    # -- participants ----------------------------------------------------

    def load_participants(self) -> dict:
        if not self.participants_path.exists():
            return {}
        return json.loads(self.participants_path.read_text(encoding="utf-8"))

    def save_participants(self, participants: dict) -> None:
        text = json.dumps(participants, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        _atomic_write(self.participants_path, text)

    # -- sessions --------------------------------------------------------

    def session_exists(self, session_id: str) -> bool:
        return safe_id(session_id) and (self.sessions_dir / f"{session_id}.json").exists()

    def save_session(self, session: Session) -> None:
        text = json.dumps(session.to_document(), sort_keys=True, ensure_ascii=False) + "\n"
        _atomic_write(self.sessions_dir / f"{session.id}.json", text)

    def load_session(self, session_id: str) -> Optional[Session]:
        if not safe_id(session_id):
            return None
        path = self.sessions_dir / f"{session_id}.json"
        if not path.exists():
            return None
        return Session.from_document(json.loads(path.read_text(encoding="utf-8")))

    # -- append-only logs --------------------------------------------------

    def append_attempt(self, participant: str, question: str, ts: float) -> None:
        line = json.dumps(
            {"participant": participant, "question": question, "ts": ts},
            sort_keys=True, separators=(",", ":"), ensure_ascii=False,
        )
        _append_lines(self.attempts_path, [line])

    def load_attempt_log(self) -> AttemptLog:
        if not self.attempts_path.exists():
            return AttemptLog()
        records = []
        with open(self.attempts_path, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    doc = json.loads(line)
                    records.append((doc["participant"], doc["question"], doc["ts"]))
        return AttemptLog.from_records(records)

    def append_response_lines(self, lines: list[str]) -> None:
        _append_lines(self.responses_path, lines)

    def iter_response_docs(self) -> Iterator[dict]:
        if not self.responses_path.exists():
            return
        with open(self.responses_path, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    yield json.loads(line)

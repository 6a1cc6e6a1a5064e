"""Prompt scheduling: daily windows and sliding-window occurrence caps.

A root question may carry a schedule restricting when a new session can
start with it: the participant-local time of day must fall inside the
daily window [start, end), and the number of prior prompts inside the
sliding window (now - interval_s, now] must be below max_occurrences.

Only prompts that start a session are recorded; questions reached inside
a running session are not subject to scheduling.
"""

from __future__ import annotations

from bisect import bisect_right, insort
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .schema.model import EmaTopic, Schedule, SurveySchema

SECONDS_PER_DAY = 86400

REASON_OK = "ok"
REASON_OUTSIDE_WINDOW = "outside_daily_window"
REASON_CAP_REACHED = "occurrence_cap_reached"


class MonotonicityError(ValueError):
    """A prompt was recorded with a timestamp earlier than the last one."""


def participant_tod(now_ts: float, utc_offset_minutes: int) -> float:
    """Participant-local time of day in seconds since local midnight."""
    return (now_ts + utc_offset_minutes * 60) % SECONDS_PER_DAY


@dataclass
class AttemptLog:
    """Per-(participant, question) history of prompt timestamps.

    Timestamps may repeat (frozen clocks are legal) but must never move
    backwards for the same key.
    """

    _by_key: dict[tuple[str, str], list[float]] = field(default_factory=dict)

    @staticmethod
    def from_records(records: Iterable[tuple[str, str, float]]) -> "AttemptLog":
        log = AttemptLog()
        for participant, question, ts in records:
            key = (participant, question)
            insort(log._by_key.setdefault(key, []), ts)
        return log

    def record_prompt(self, participant: str, question: str, ts: float) -> None:
        history = self._by_key.setdefault((participant, question), [])
        if history and ts < history[-1]:
            raise MonotonicityError(
                f"prompt at ts {ts} precedes last ts {history[-1]} "
                f"for {participant!r}/{question!r}"
            )
        history.append(ts)

    def occurrences(self, participant: str, question: str, now_ts: float, interval_s: float) -> int:
        """Count of prompts with ts in (now_ts - interval_s, now_ts]."""
        history = self._by_key.get((participant, question), [])
        hi = bisect_right(history, now_ts)
        lo = bisect_right(history, now_ts - interval_s)
        return hi - lo

    def last_ts(self, participant: str, question: str) -> Optional[float]:
        history = self._by_key.get((participant, question))
        return history[-1] if history else None


@dataclass(frozen=True)
class EligibilityResult:
    eligible: bool
    reason: str  # REASON_OK when eligible


def is_eligible(
    schedule: Optional[Schedule],
    log: AttemptLog,
    participant: str,
    question: str,
    now_ts: float,
    tod_s: float,
) -> EligibilityResult:
    """Decide whether question may start a session for participant now."""
    if schedule is None:
        return EligibilityResult(True, REASON_OK)
    if not (schedule.start_s <= tod_s < schedule.end_s):
        return EligibilityResult(False, REASON_OUTSIDE_WINDOW)
    seen = log.occurrences(participant, question, now_ts, schedule.interval_s)
    if seen >= schedule.max_occurrences:
        return EligibilityResult(False, REASON_CAP_REACHED)
    return EligibilityResult(True, REASON_OK)


def eligible_roots(
    schema: SurveySchema,
    topic: EmaTopic,
    log: AttemptLog,
    participant: str,
    now_ts: float,
    tod_s: float,
) -> list[tuple[str, EligibilityResult]]:
    """Eligibility of every root of topic, in authored root order."""
    out: list[tuple[str, EligibilityResult]] = []
    for root in topic.root_nodes:
        node = schema.node(root)
        schedule = schema.schedule(node.schedule) if node and node.schedule else None
        out.append((root, is_eligible(schedule, log, participant, root, now_ts, tod_s)))
    return out

"""Turn-by-turn conversation engine.

The engine is pure with respect to its inputs: callers supply the clock
(now_ts plus participant-local tod_s), the attempt log, and a data
gateway. Randomness is confined to paraphrase draws, which are derived
from the session seed and a per-session draw counter, so a session replays
identically from its stored state.
"""

from __future__ import annotations

import hashlib
import logging
import math
import random
import re
import secrets
from dataclasses import dataclass
from typing import Optional

from ..rules.ast import Value
from ..rules.evaluator import EvalContext, RuleEvalError, evaluate
from ..rules.fetch import DataGateway, run_fetch
from ..rules.parser import parse_rule
from ..scheduling import AttemptLog, eligible_roots
from ..schema.model import AnswerSpec, EmaQuestionNode, SurveySchema, VisualOutput
from .session import (
    ParticipantInput,
    PromptPayload,
    ResponseRecord,
    STATUS_ABANDONED,
    STATUS_ACTIVE,
    STATUS_COMPLETED,
    Session,
)

logger = logging.getLogger(__name__)

OUTCOME_ADVANCE = "advance"
OUTCOME_REPROMPT = "reprompt"
OUTCOME_COMPLETED = "completed"
OUTCOME_ABANDONED = "abandoned"

REASON_NO_ROOTS = "no_root_nodes"

_WORD_NUMBERS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
}

_INT_RE = re.compile(r"[+-]?\d+")


def paraphrase_index(seed: int, draw: int, pool_size: int) -> int:
    """Uniform, seed-stable script choice for the draw-th prompt.

    Each draw gets its own generator keyed by (seed, draw) so the choice
    depends only on session seed and position, never on call interleaving.
    """
    return random.Random(f"{seed}:{draw}").randrange(pool_size)


def session_id_for(participant_id: str, topic_id: str, seed: Optional[int]) -> str:
    """Deterministic id when seeded, random otherwise."""
    if seed is None:
        return secrets.token_hex(16)
    digest = hashlib.sha256(f"session:{participant_id}:{topic_id}:{seed}".encode()).hexdigest()
    return digest[:32]


def _wire_number(v: float):
    return int(v) if v == int(v) else v


def widget_descriptor(visual: Optional[VisualOutput]) -> Optional[dict]:
    if visual is None:
        return None
    if visual.kind == "buttons":
        return {
            "kind": "buttons",
            "buttons": [{"label": b.label, "value": b.value} for b in visual.buttons],
        }
    if visual.kind == "slider":
        return {
            "kind": "slider",
            "min": _wire_number(visual.min),
            "max": _wire_number(visual.max),
            "step": _wire_number(visual.step),
        }
    return {"kind": "text_panel", "text": visual.text}


def render_prompt(schema: SurveySchema, node: EmaQuestionNode, session: Session) -> PromptPayload:
    """Draw a paraphrase for node and advance the session's draw counter."""
    audio = schema.audio(node.audio_output)
    script = audio.scripts[paraphrase_index(session.seed, session.draws, len(audio.scripts))]
    session.draws += 1
    visual = schema.visual(node.visual_output) if node.visual_output else None
    return PromptPayload(node_id=node.id, title=script, descriptor=widget_descriptor(visual))


def parse_answer(spec: AnswerSpec, visual: Optional[VisualOutput], inp: ParticipantInput) -> Value:
    """Normalize raw input to an answer value; None when unparseable.

    Utterances go through the answer's synonym_map first, then a spoken
    number table (zero..ten), then a literal parse. Widget events skip
    normalization: widgets post canonical values already.
    """
    if inp.kind == "widget_event":
        return _parse_widget(spec, inp.value)
    text = str(inp.value).strip()
    folded = text.lower()
    mapped = _synonym(spec, folded)
    if spec.kind in ("likert", "numeric"):
        if mapped is not None:
            text = mapped
            folded = mapped.lower()
        if folded in _WORD_NUMBERS:
            return float(_WORD_NUMBERS[folded])
        return _parse_number(spec.kind, text)
    if spec.kind == "choice":
        if mapped is not None:
            return mapped
        if visual is not None and visual.kind == "buttons":
            for button in visual.buttons:
                if folded == button.label.lower():
                    return button.value
            for button in visual.buttons:
                if folded == button.value.lower():
                    return button.value
        return None
    return text  # free_text


def _synonym(spec: AnswerSpec, folded: str) -> Optional[str]:
    for key, value in spec.synonym_map.items():
        if key.lower() == folded:
            return value
    return None


def _parse_number(kind: str, text: str) -> Value:
    if kind == "likert":
        if _INT_RE.fullmatch(text) is None:
            return None
        return float(int(text))
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _parse_widget(spec: AnswerSpec, value: object) -> Value:
    if spec.kind in ("likert", "numeric"):
        if type(value) in (int, float):
            number = float(value)
            if not math.isfinite(number):
                return None
            if spec.kind == "likert" and number != int(number):
                return None
            return number
        if isinstance(value, str):
            return _parse_number(spec.kind, value.strip())
        return None
    if isinstance(value, str):
        return value
    return None


def is_valid_answer(spec: AnswerSpec, parsed: Value, now_ts: float) -> bool:
    """parsed=None never validates; otherwise the validation rule decides."""
    if parsed is None:
        return False
    if spec.validation_rule is None:
        return True
    ctx = EvalContext({"_answer_": parsed, "_now_": now_ts})
    try:
        result = evaluate(parse_rule(spec.validation_rule), ctx)
    except RuleEvalError as exc:
        logger.warning("validation rule failed for %s: %s", spec.id, exc)
        return False
    return result is True


def select_next_node(
    schema: SurveySchema,
    node_id: str,
    answer: Value,
    now_ts: float,
    gateway: DataGateway,
):
    """First outgoing condition (ascending priority) whose rule holds.

    A raising or non-boolean rule counts as not satisfied. Returns the
    winning QuestionCondition, or None when the path ends here.
    """
    for cond in schema.outgoing(node_id):
        bindings: dict[str, Value] = {"_answer_": answer, "_now_": now_ts}
        if cond.fetch is not None:
            bindings["_fetched_"] = run_fetch(cond.fetch, gateway, bindings)
        try:
            result = evaluate(parse_rule(cond.return_rule), EvalContext(bindings))
        except RuleEvalError as exc:
            logger.warning("return rule failed for %s: %s", cond.id, exc)
            continue
        if result is True:
            return cond
    return None


@dataclass
class StartResult:
    session: Optional[Session]
    prompt: Optional[PromptPayload]
    reason: Optional[str]  # why nothing was eligible; None on success


def start_session(
    schema: SurveySchema,
    schema_id: str,
    topic_id: str,
    participant_id: str,
    *,
    now_ts: float,
    tod_s: float,
    attempt_log: AttemptLog,
    seed: Optional[int] = None,
) -> StartResult:
    """Pick the first eligible root of topic_id and open a session on it.

    The chosen root's prompt is recorded in the attempt log. When no root
    is eligible, reports the first root's reason (authored order).
    """
    topic = schema.topic(topic_id)
    if topic is None:
        raise KeyError(f"unknown topic {topic_id!r}")
    results = eligible_roots(schema, topic, attempt_log, participant_id, now_ts, tod_s)
    chosen = next((root for root, res in results if res.eligible), None)
    if chosen is None:
        reason = results[0][1].reason if results else REASON_NO_ROOTS
        return StartResult(None, None, reason)
    attempt_log.record_prompt(participant_id, chosen, now_ts)
    effective_seed = seed if seed is not None else secrets.randbits(63)
    node = schema.node(chosen)
    spec = schema.answer(node.answer)
    session = Session(
        id=session_id_for(participant_id, topic_id, seed),
        schema_id=schema_id,
        topic_id=topic_id,
        participant_id=participant_id,
        seed=effective_seed,
        status=STATUS_ACTIVE,
        current_node=chosen,
        attempts_remaining=spec.attempts_allowed,
    )
    prompt = render_prompt(schema, node, session)
    return StartResult(session, prompt, None)


@dataclass
class TurnResult:
    outcome: str  # advance | reprompt | completed | abandoned
    prompt: Optional[PromptPayload]  # present for advance and reprompt
    record: ResponseRecord


def _raw_text(value: object) -> str:
    if isinstance(value, str):
        return value
    if type(value) is bool:
        return "true" if value else "false"
    if type(value) in (int, float):
        f = float(value)
        return str(int(f)) if f == int(f) and math.isfinite(f) else repr(f)
    return str(value)


def _error_prompt(
    schema: SurveySchema, node: EmaQuestionNode, spec: AnswerSpec,
    failed_attempt: int, session: Session,
) -> PromptPayload:
    if spec.error_prompts:
        text = spec.error_prompts[min(failed_attempt - 1, len(spec.error_prompts) - 1)]
    else:
        # No authored corrections: re-ask with a fresh paraphrase.
        audio = schema.audio(node.audio_output)
        text = audio.scripts[paraphrase_index(session.seed, session.draws, len(audio.scripts))]
        session.draws += 1
    return PromptPayload(node_id=node.id, title=text, descriptor=None, is_error_reprompt=True)


def submit_answer(
    schema: SurveySchema,
    session: Session,
    inp: ParticipantInput,
    now_ts: float,
    gateway: DataGateway,
) -> TurnResult:
    """Apply one participant input to an active session."""
    if session.status != STATUS_ACTIVE:
        raise ValueError(f"session {session.id} is {session.status}")
    node = schema.node(session.current_node)
    spec = schema.answer(node.answer)
    visual = schema.visual(node.visual_output) if node.visual_output else None
    parsed = parse_answer(spec, visual, inp)
    valid = is_valid_answer(spec, parsed, now_ts)
    attempt_index = spec.attempts_allowed - session.attempts_remaining + 1
    record = ResponseRecord(
        node_id=node.id,
        kind=inp.kind,
        raw=_raw_text(inp.value),
        parsed=parsed if valid else None,
        valid=valid,
        attempt_index=attempt_index,
        ts=now_ts,
    )
    session.records.append(record)
    if not valid:
        session.attempts_remaining -= 1
        if session.attempts_remaining <= 0:
            session.status = STATUS_ABANDONED
            session.current_node = None
            return TurnResult(OUTCOME_ABANDONED, None, record)
        return TurnResult(
            OUTCOME_REPROMPT, _error_prompt(schema, node, spec, attempt_index, session), record
        )
    chosen = select_next_node(schema, node.id, parsed, now_ts, gateway)
    if chosen is None:
        session.status = STATUS_COMPLETED
        session.current_node = None
        return TurnResult(OUTCOME_COMPLETED, None, record)
    next_node = schema.node(chosen.target)
    session.current_node = next_node.id
    session.attempts_remaining = schema.answer(next_node.answer).attempts_allowed
    return TurnResult(OUTCOME_ADVANCE, render_prompt(schema, next_node, session), record)


def abandon(session: Session) -> None:
    """End an active session without an answer (hang-up, EOF)."""
    if session.status == STATUS_ACTIVE:
        session.status = STATUS_ABANDONED
        session.current_node = None

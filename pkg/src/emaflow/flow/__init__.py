"""Conversation flow: sessions, turn engine, path enumeration."""

from .engine import (
    OUTCOME_ABANDONED,
    OUTCOME_ADVANCE,
    OUTCOME_COMPLETED,
    OUTCOME_REPROMPT,
    REASON_NO_ROOTS,
    StartResult,
    TurnResult,
    abandon,
    is_valid_answer,
    paraphrase_index,
    parse_answer,
    render_prompt,
    select_next_node,
    session_id_for,
    start_session,
    submit_answer,
    widget_descriptor,
)
from .paths import Path, PathStep, answer_domain, enumerate_paths
from .session import (
    ParticipantInput,
    PromptPayload,
    ResponseRecord,
    STATUS_ABANDONED,
    STATUS_ACTIVE,
    STATUS_COMPLETED,
    Session,
    response_record_json,
)

__all__ = [
    "OUTCOME_ABANDONED",
    "OUTCOME_ADVANCE",
    "OUTCOME_COMPLETED",
    "OUTCOME_REPROMPT",
    "Path",
    "PathStep",
    "ParticipantInput",
    "PromptPayload",
    "REASON_NO_ROOTS",
    "ResponseRecord",
    "STATUS_ABANDONED",
    "STATUS_ACTIVE",
    "STATUS_COMPLETED",
    "Session",
    "StartResult",
    "TurnResult",
    "abandon",
    "answer_domain",
    "enumerate_paths",
    "is_valid_answer",
    "paraphrase_index",
    "parse_answer",
    "render_prompt",
    "response_record_json",
    "select_next_node",
    "session_id_for",
    "start_session",
    "submit_answer",
    "widget_descriptor",
]

"""Schema entities, decoding, validation, and canonical serialization."""

from .loader import load_schema
from .model import (
    ANSWER_KINDS,
    AnswerSpec,
    AudioOutput,
    ButtonSpec,
    Diagnostic,
    EmaQuestionNode,
    EmaTopic,
    QuestionCondition,
    SCHEMA_VERSION,
    Schedule,
    SurveySchema,
    VISUAL_KINDS,
    VisualOutput,
    has_errors,
    parse_hms,
    topic_graph,
)
from .serialize import schema_to_document, serialize_schema
from .validate import check_document, validate_schema

__all__ = [
    "ANSWER_KINDS",
    "AnswerSpec",
    "AudioOutput",
    "ButtonSpec",
    "Diagnostic",
    "EmaQuestionNode",
    "EmaTopic",
    "QuestionCondition",
    "SCHEMA_VERSION",
    "Schedule",
    "SurveySchema",
    "VISUAL_KINDS",
    "VisualOutput",
    "check_document",
    "has_errors",
    "load_schema",
    "parse_hms",
    "schema_to_document",
    "serialize_schema",
    "topic_graph",
    "validate_schema",
]

"""Canonical serialization of schemas.

The canonical form is deterministic: collections sorted by id, fixed key
order, two-space indent, non-ASCII kept, trailing newline, optional fields
omitted when absent. load(serialize(s)) reproduces s exactly, and
serialize(load(text)) is a fixed point for canonical text.
"""

from __future__ import annotations

import json

from .model import (
    AnswerSpec,
    AudioOutput,
    EmaQuestionNode,
    EmaTopic,
    QuestionCondition,
    Schedule,
    SurveySchema,
    VisualOutput,
)


def _topic_doc(t: EmaTopic) -> dict:
    doc: dict = {"id": t.id}
    if t.title is not None:
        doc["title"] = t.title
    doc["root_nodes"] = list(t.root_nodes)
    return doc


def _node_doc(n: EmaQuestionNode) -> dict:
    doc: dict = {"id": n.id, "topic_id": n.topic_id, "audio_output": n.audio_output}
    if n.visual_output is not None:
        doc["visual_output"] = n.visual_output
    doc["answer"] = n.answer
    if n.schedule is not None:
        doc["schedule"] = n.schedule
    return doc


def _audio_doc(a: AudioOutput) -> dict:
    return {"id": a.id, "scripts": list(a.scripts)}


def _visual_doc(v: VisualOutput) -> dict:
    doc: dict = {"id": v.id, "kind": v.kind}
    if v.kind == "buttons":
        doc["buttons"] = [{"label": b.label, "value": b.value} for b in v.buttons]
    elif v.kind == "slider":
        doc["min"] = v.min
        doc["max"] = v.max
        doc["step"] = v.step
    else:
        doc["text"] = v.text
    return doc


def _answer_doc(a: AnswerSpec) -> dict:
    doc: dict = {"id": a.id, "kind": a.kind, "attempts_allowed": a.attempts_allowed}
    if a.validation_rule is not None:
        doc["validation_rule"] = a.validation_rule
    if a.error_prompts:
        doc["error_prompts"] = list(a.error_prompts)
    if a.synonym_map:
        doc["synonym_map"] = {k: a.synonym_map[k] for k in sorted(a.synonym_map)}
    return doc


def _condition_doc(c: QuestionCondition) -> dict:
    doc: dict = {
        "id": c.id,
        "source": c.source,
        "target": c.target,
        "priority": c.priority,
        "return_rule": c.return_rule,
    }
    if c.fetch is not None:
        doc["fetch"] = {
            "method": c.fetch.method,
            "url_template": c.fetch.url_template,
            "extract_path": c.fetch.extract_path,
            "timeout_s": c.fetch.timeout_s,
            "on_error": c.fetch.on_error,
        }
    return doc


def _schedule_doc(s: Schedule) -> dict:
    return {
        "id": s.id,
        "window_start": s.window_start,
        "window_end": s.window_end,
        "interval_s": s.interval_s,
        "max_occurrences": s.max_occurrences,
    }


def schema_to_document(schema: SurveySchema) -> dict:
    """Plain-dict form of a schema in canonical order."""
    return {
        "schema_version": schema.schema_version,
        "topics": [_topic_doc(t) for t in schema.topics],
        "nodes": [_node_doc(n) for n in schema.nodes],
        "audio_outputs": [_audio_doc(a) for a in schema.audio_outputs],
        "visual_outputs": [_visual_doc(v) for v in schema.visual_outputs],
        "answers": [_answer_doc(a) for a in schema.answers],
        "conditions": [_condition_doc(c) for c in schema.conditions],
        "schedules": [_schedule_doc(s) for s in schema.schedules],
    }


def serialize_schema(schema: SurveySchema) -> str:
    """Canonical JSON text for a schema (ends with a newline)."""
    return json.dumps(schema_to_document(schema), indent=2, ensure_ascii=False) + "\n"

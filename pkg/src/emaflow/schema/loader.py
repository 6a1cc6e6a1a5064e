"""Decoding of schema documents into the entity model.

load_schema performs all per-entity (local) checks: field presence and
types, id uniqueness, rule syntax, widget shape, window sanity. Anything
that needs to look across entities (references, cycles, priorities) lives
in validate.py. A document that produces any error decodes to None.
"""

from __future__ import annotations

import json
from typing import Callable, Optional

from ..rules.fetch import ALLOWED_PLACEHOLDERS, FetchDescriptor, PLACEHOLDER_RE
from ..rules.parser import RuleParseError, parse_rule
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
)

_TOP_KEYS = (
    "schema_version",
    "topics",
    "nodes",
    "audio_outputs",
    "visual_outputs",
    "answers",
    "conditions",
    "schedules",
)


class _Fields:
    """Typed field access over one entity dict, accumulating diagnostics."""

    def __init__(self, doc: dict, entity_id: str, diags: list[Diagnostic]):
        self.doc = doc
        self.entity_id = entity_id
        self.diags = diags
        self.seen: set[str] = set()
        self.ok = True

    def error(self, code: str, message: str) -> None:
        self.ok = False
        self.diags.append(Diagnostic("error", code, self.entity_id, message))

    def warn(self, code: str, message: str) -> None:
        self.diags.append(Diagnostic("warning", code, self.entity_id, message))

    def _get(self, key: str, required: bool):
        self.seen.add(key)
        if key not in self.doc:
            if required:
                self.error("bad-field", f"missing required field {key!r}")
            return None
        return self.doc[key]

    def str_(self, key: str, required: bool = True, allow_empty: bool = False,
             code: str = "bad-field") -> Optional[str]:
        v = self._get(key, required)
        if v is None:
            return None
        if not isinstance(v, str) or (not allow_empty and v == ""):
            self.error(code, f"field {key!r} must be a non-empty string")
            return None
        return v

    def int_(self, key: str, required: bool = True, minimum: Optional[int] = None,
             code: str = "bad-field") -> Optional[int]:
        v = self._get(key, required)
        if v is None:
            return None
        if type(v) is not int or (minimum is not None and v < minimum):
            bound = "" if minimum is None else f" >= {minimum}"
            self.error(code, f"field {key!r} must be an integer{bound}")
            return None
        return v

    def num_(self, key: str, required: bool = True, code: str = "bad-field") -> Optional[float]:
        v = self._get(key, required)
        if v is None:
            return None
        if type(v) not in (int, float):
            self.error(code, f"field {key!r} must be a number")
            return None
        return float(v)

    def str_list(self, key: str, required: bool = True) -> Optional[tuple[str, ...]]:
        v = self._get(key, required)
        if v is None:
            return None if required else ()
        if not isinstance(v, list) or any(not isinstance(x, str) for x in v):
            self.error("bad-field", f"field {key!r} must be a list of strings")
            return None
        return tuple(v)

    def raw(self, key: str, required: bool = True):
        return self._get(key, required)

    def rule(self, key: str, required: bool = True) -> Optional[str]:
        text = self.str_(key, required=required, allow_empty=False)
        if text is None:
            return None
        try:
            parse_rule(text)
        except RuleParseError as exc:
            self.error("bad-rule", f"field {key!r} does not parse: {exc}")
            return None
        return text

    def reject_unknown_keys(self) -> None:
        for key in self.doc:
            if key not in self.seen:
                self.warn("unknown-key", f"unknown key {key!r}")


def _load_topic(f: _Fields) -> Optional[EmaTopic]:
    ident = f.str_("id")
    roots = f.str_list("root_nodes")
    title = f.str_("title", required=False)
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return EmaTopic(id=ident, root_nodes=roots, title=title)


def _load_node(f: _Fields) -> Optional[EmaQuestionNode]:
    ident = f.str_("id")
    topic_id = f.str_("topic_id")
    audio = f.str_("audio_output")
    answer = f.str_("answer")
    visual = f.str_("visual_output", required=False)
    schedule = f.str_("schedule", required=False)
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return EmaQuestionNode(
        id=ident, topic_id=topic_id, audio_output=audio, answer=answer,
        visual_output=visual, schedule=schedule,
    )


def _load_audio(f: _Fields) -> Optional[AudioOutput]:
    ident = f.str_("id")
    scripts = f.str_list("scripts")
    if scripts is not None and len(scripts) == 0:
        f.error("empty-scripts", "audio output has no scripts to speak")
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return AudioOutput(id=ident, scripts=scripts)


def _load_visual(f: _Fields) -> Optional[VisualOutput]:
    ident = f.str_("id")
    kind = f.str_("kind")
    if kind is not None and kind not in VISUAL_KINDS:
        f.error("bad-widget", f"unknown widget kind {kind!r}")
        kind = None
    buttons: tuple[ButtonSpec, ...] = ()
    lo = hi = step = None
    text = None
    if kind == "buttons":
        raw = f.raw("buttons")
        buttons = _load_buttons(f, raw) if f.ok and raw is not None else ()
    elif kind == "slider":
        lo = f.num_("min", code="bad-widget")
        hi = f.num_("max", code="bad-widget")
        step = f.num_("step", code="bad-widget")
        if lo is not None and hi is not None and lo >= hi:
            f.error("bad-widget", f"slider needs min < max, got {lo} >= {hi}")
        if step is not None and step <= 0:
            f.error("bad-widget", f"slider step must be positive, got {step}")
    elif kind == "text_panel":
        text = f.str_("text", allow_empty=True, code="bad-widget")
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return VisualOutput(
        id=ident, kind=kind, buttons=buttons, min=lo, max=hi, step=step, text=text
    )


def _load_buttons(f: _Fields, raw) -> tuple[ButtonSpec, ...]:
    if not isinstance(raw, list) or len(raw) == 0:
        f.error("bad-widget", "buttons widget needs a non-empty button list")
        return ()
    out: list[ButtonSpec] = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            f.error("bad-widget", f"buttons[{i}] must be an object")
            continue
        label = item.get("label")
        if not isinstance(label, str) or label == "":
            f.error("bad-widget", f"buttons[{i}] needs a non-empty label")
            continue
        value = item.get("value", label)
        if not isinstance(value, str) or value == "":
            f.error("bad-widget", f"buttons[{i}] value must be a non-empty string")
            continue
        for key in item:
            if key not in ("label", "value"):
                f.warn("unknown-key", f"buttons[{i}] has unknown key {key!r}")
        out.append(ButtonSpec(label=label, value=value))
    return tuple(out)


def _load_answer(f: _Fields) -> Optional[AnswerSpec]:
    ident = f.str_("id")
    kind = f.str_("kind")
    if kind is not None and kind not in ANSWER_KINDS:
        f.error("bad-field", f"unknown answer kind {kind!r}")
    attempts = f.int_("attempts_allowed", minimum=1, code="bad-attempts")
    rule = f.rule("validation_rule", required=False)
    prompts = f.str_list("error_prompts", required=False)
    synonyms = _load_synonyms(f)
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return AnswerSpec(
        id=ident, kind=kind, attempts_allowed=attempts, validation_rule=rule,
        error_prompts=prompts or (), synonym_map=synonyms,
    )


def _load_synonyms(f: _Fields) -> dict[str, str]:
    raw = f.raw("synonym_map", required=False)
    if raw is None:
        return {}
    if not isinstance(raw, dict) or any(
        not isinstance(k, str) or k == "" or not isinstance(v, str) for k, v in raw.items()
    ):
        f.error("bad-field", "synonym_map must map non-empty strings to strings")
        return {}
    return dict(raw)


def _load_condition(f: _Fields) -> Optional[QuestionCondition]:
    ident = f.str_("id")
    source = f.str_("source")
    target = f.str_("target")
    priority = f.int_("priority")
    rule = f.rule("return_rule")
    fetch = None
    raw_fetch = f.raw("fetch", required=False)
    if raw_fetch is not None:
        fetch = _load_fetch(f, raw_fetch)
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return QuestionCondition(
        id=ident, source=source, target=target, priority=priority,
        return_rule=rule, fetch=fetch,
    )


def _load_fetch(f: _Fields, raw) -> Optional[FetchDescriptor]:
    if not isinstance(raw, dict):
        f.error("bad-field", "fetch must be an object")
        return None
    sub = _Fields(raw, f.entity_id, f.diags)
    method = sub.str_("method")
    if method is not None and method != "GET":
        sub.error("bad-field", f"fetch method must be \"GET\", got {method!r}")
    template = sub.str_("url_template")
    if template is not None:
        bad = sorted(set(PLACEHOLDER_RE.findall(template)) - ALLOWED_PLACEHOLDERS)
        if bad:
            names = ", ".join(bad)
            sub.error("bad-placeholder", f"url_template uses unknown placeholder(s): {names}")
    path = sub.str_("extract_path")
    timeout = sub.num_("timeout_s")
    if timeout is not None and timeout <= 0:
        sub.error("bad-field", f"fetch timeout_s must be positive, got {timeout}")
    on_error = sub.raw("on_error", required=False)
    if on_error is not None and type(on_error) not in (bool, int, float, str):
        sub.error("bad-field", "fetch on_error must be a scalar or null")
        on_error = None
    sub.reject_unknown_keys()
    if not sub.ok:
        f.ok = False
        return None
    return FetchDescriptor(
        method=method, url_template=template, extract_path=path,
        timeout_s=timeout, on_error=float(on_error) if type(on_error) in (int, float) else on_error,
    )


def _load_schedule(f: _Fields) -> Optional[Schedule]:
    ident = f.str_("id")
    start = f.str_("window_start", code="invalid-window")
    end = f.str_("window_end", code="invalid-window")
    start_s = parse_hms(start) if start is not None else None
    end_s = parse_hms(end) if end is not None else None
    if start is not None and start_s is None:
        f.error("invalid-window", f"window_start {start!r} is not HH:MM:SS")
    if end is not None and end_s is None:
        f.error("invalid-window", f"window_end {end!r} is not HH:MM:SS")
    if start_s is not None and end_s is not None and start_s >= end_s:
        f.error("invalid-window", f"window is empty: start {start!r} is not before end {end!r}")
    interval = f.int_("interval_s", minimum=1, code="invalid-window")
    cap = f.int_("max_occurrences", minimum=1, code="invalid-window")
    f.reject_unknown_keys()
    if not f.ok:
        return None
    return Schedule(
        id=ident, window_start=start, window_end=end,
        interval_s=interval, max_occurrences=cap,
    )


_LOADERS: dict[str, Callable[[_Fields], object]] = {
    "topics": _load_topic,
    "nodes": _load_node,
    "audio_outputs": _load_audio,
    "visual_outputs": _load_visual,
    "answers": _load_answer,
    "conditions": _load_condition,
    "schedules": _load_schedule,
}


def _load_collection(document: dict, key: str, diags: list[Diagnostic]) -> list:
    raw = document.get(key, [])
    if not isinstance(raw, list):
        diags.append(Diagnostic("error", "bad-field", "document", f"{key!r} must be a list"))
        return []
    loader = _LOADERS[key]
    out = []
    seen_ids: set[str] = set()
    for index, item in enumerate(raw):
        slot = f"{key}[{index}]"
        if not isinstance(item, dict):
            diags.append(Diagnostic("error", "bad-field", slot, "entity must be an object"))
            continue
        raw_id = item.get("id")
        entity_id = raw_id if isinstance(raw_id, str) and raw_id else slot
        entity = loader(_Fields(item, entity_id, diags))
        if entity is None:
            continue
        if entity.id in seen_ids:
            diags.append(
                Diagnostic("error", "duplicate-id", entity.id, f"id {entity.id!r} appears more than once in {key}")
            )
            continue
        seen_ids.add(entity.id)
        out.append(entity)
    return out


def load_schema(document) -> tuple[Optional[SurveySchema], list[Diagnostic]]:
    """Decode a schema document (dict, JSON text, or bytes).

    Returns (schema, diagnostics); schema is None when any diagnostic is an
    error. Warnings alone do not block decoding.
    """
    diags: list[Diagnostic] = []
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except ValueError as exc:
            diags.append(Diagnostic("error", "parse-error", "document", f"not valid JSON: {exc}"))
            return None, diags
    if not isinstance(document, dict):
        diags.append(Diagnostic("error", "bad-document", "document", "top level must be a JSON object"))
        return None, diags

    version = document.get("schema_version")
    if version is None:
        diags.append(Diagnostic("error", "bad-document", "document", "schema_version is required"))
    elif version != SCHEMA_VERSION:
        diags.append(
            Diagnostic(
                "error", "unsupported-version", "document",
                f"schema_version {version!r} is not supported (expected {SCHEMA_VERSION!r})",
            )
        )
    for key in document:
        if key not in _TOP_KEYS:
            diags.append(Diagnostic("warning", "unknown-key", "document", f"unknown key {key!r}"))

    collections = {key: _load_collection(document, key, diags) for key in _LOADERS}
    if has_errors(diags):
        return None, diags
    schema = SurveySchema(
        schema_version=version,
        topics=tuple(collections["topics"]),
        nodes=tuple(collections["nodes"]),
        audio_outputs=tuple(collections["audio_outputs"]),
        visual_outputs=tuple(collections["visual_outputs"]),
        answers=tuple(collections["answers"]),
        conditions=tuple(collections["conditions"]),
        schedules=tuple(collections["schedules"]),
    )
    return schema, diags

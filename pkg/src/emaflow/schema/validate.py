"""Cross-entity validation: references, priorities, cycles, reachability."""

from __future__ import annotations

from typing import Optional

from ..rules.evaluator import free_variables
from ..rules.parser import parse_rule
from .loader import load_schema
from .model import Diagnostic, SurveySchema, has_errors

_VALIDATION_VARS = frozenset({"_answer_", "_now_"})
_RETURN_VARS = frozenset({"_answer_", "_now_", "_fetched_"})


def validate_schema(schema: SurveySchema) -> list[Diagnostic]:
    """Relational diagnostics for a structurally sound schema."""
    diags: list[Diagnostic] = []
    _check_references(schema, diags)
    _check_topic_membership(schema, diags)
    _check_priorities(schema, diags)
    _check_cycles(schema, diags)
    _check_reachability(schema, diags)
    _check_rule_variables(schema, diags)
    _check_schedules_on_roots(schema, diags)
    return diags


def check_document(document) -> tuple[Optional[SurveySchema], list[Diagnostic]]:
    """Full pipeline: decode, then validate. schema is None on any error."""
    schema, diags = load_schema(document)
    if schema is not None:
        diags = diags + validate_schema(schema)
        if has_errors(diags):
            schema = None
    return schema, diags


def _dangle(diags: list[Diagnostic], entity_id: str, field: str, ref: str, kind: str) -> None:
    diags.append(
        Diagnostic("error", "dangling-ref", entity_id, f"{field} {ref!r} does not name a {kind}")
    )


def _check_references(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    topics = {t.id for t in schema.topics}
    nodes = {n.id for n in schema.nodes}
    audio = {a.id for a in schema.audio_outputs}
    visuals = {v.id for v in schema.visual_outputs}
    answers = {a.id for a in schema.answers}
    schedules = {s.id for s in schema.schedules}

    for topic in schema.topics:
        for root in topic.root_nodes:
            if root not in nodes:
                _dangle(diags, topic.id, "root node", root, "node")
    for node in schema.nodes:
        if node.topic_id not in topics:
            _dangle(diags, node.id, "topic_id", node.topic_id, "topic")
        if node.audio_output not in audio:
            _dangle(diags, node.id, "audio_output", node.audio_output, "audio output")
        if node.visual_output is not None and node.visual_output not in visuals:
            _dangle(diags, node.id, "visual_output", node.visual_output, "visual output")
        if node.answer not in answers:
            _dangle(diags, node.id, "answer", node.answer, "answer spec")
        if node.schedule is not None and node.schedule not in schedules:
            _dangle(diags, node.id, "schedule", node.schedule, "schedule")
    for cond in schema.conditions:
        if cond.source not in nodes:
            _dangle(diags, cond.id, "source", cond.source, "node")
        if cond.target not in nodes:
            _dangle(diags, cond.id, "target", cond.target, "node")


def _check_topic_membership(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    for topic in schema.topics:
        for root in topic.root_nodes:
            node = schema.node(root)
            if node is not None and node.topic_id != topic.id:
                diags.append(
                    Diagnostic(
                        "error", "root-not-in-topic", topic.id,
                        f"root {root!r} belongs to topic {node.topic_id!r}",
                    )
                )
    for cond in schema.conditions:
        source = schema.node(cond.source)
        target = schema.node(cond.target)
        if source is not None and target is not None and source.topic_id != target.topic_id:
            diags.append(
                Diagnostic(
                    "error", "cross-topic-edge", cond.id,
                    f"edge {cond.source!r} -> {cond.target!r} crosses from topic "
                    f"{source.topic_id!r} into {target.topic_id!r}",
                )
            )


def _check_priorities(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    by_source: dict[str, dict[int, str]] = {}
    for cond in schema.conditions:
        taken = by_source.setdefault(cond.source, {})
        if cond.priority in taken:
            diags.append(
                Diagnostic(
                    "error", "duplicate-priority", cond.id,
                    f"priority {cond.priority} at source {cond.source!r} is already "
                    f"used by {taken[cond.priority]!r}",
                )
            )
        else:
            taken[cond.priority] = cond.id


def _adjacency(schema: SurveySchema) -> dict[str, list[str]]:
    nodes = {n.id for n in schema.nodes}
    adj: dict[str, list[str]] = {n: [] for n in sorted(nodes)}
    for cond in schema.conditions:  # sorted by id already
        if cond.source in nodes and cond.target in nodes:
            adj[cond.source].append(cond.target)
    return adj


def _check_cycles(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    adj = _adjacency(schema)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in adj}
    for start in adj:
        if color[start] != WHITE:
            continue
        color[start] = GRAY
        stack = [(start, iter(adj[start]))]
        path = [start]
        while stack:
            node, edges = stack[-1]
            nxt = next(edges, None)
            if nxt is None:
                color[node] = BLACK
                stack.pop()
                path.pop()
                continue
            if color[nxt] == GRAY:
                loop = path[path.index(nxt):] + [nxt]
                diags.append(
                    Diagnostic(
                        "error", "cycle-detected", nxt,
                        "conditions form a cycle: " + " -> ".join(loop),
                    )
                )
            elif color[nxt] == WHITE:
                color[nxt] = GRAY
                stack.append((nxt, iter(adj[nxt])))
                path.append(nxt)


def _check_reachability(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    adj = _adjacency(schema)
    seen: set[str] = set()
    frontier = [r for t in schema.topics for r in t.root_nodes if r in adj]
    while frontier:
        node = frontier.pop()
        if node in seen:
            continue
        seen.add(node)
        frontier.extend(adj[node])
    for node in schema.nodes:
        if node.id not in seen:
            diags.append(
                Diagnostic(
                    "warning", "unreachable-node", node.id,
                    "node is not reachable from any topic root",
                )
            )


def _check_rule_variables(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    for answer in schema.answers:
        if answer.validation_rule is None:
            continue
        extra = free_variables(parse_rule(answer.validation_rule)) - _VALIDATION_VARS
        if extra:
            names = ", ".join(sorted(extra))
            diags.append(
                Diagnostic(
                    "warning", "unknown-variable", answer.id,
                    f"validation_rule reads unbound variable(s): {names}",
                )
            )
    for cond in schema.conditions:
        free = free_variables(parse_rule(cond.return_rule))
        if "_fetched_" in free and cond.fetch is None:
            diags.append(
                Diagnostic(
                    "warning", "fetched-without-fetch", cond.id,
                    "return_rule reads _fetched_ but the condition has no fetch",
                )
            )
        extra = free - _RETURN_VARS
        if extra:
            names = ", ".join(sorted(extra))
            diags.append(
                Diagnostic(
                    "warning", "unknown-variable", cond.id,
                    f"return_rule reads unbound variable(s): {names}",
                )
            )


def _check_schedules_on_roots(schema: SurveySchema, diags: list[Diagnostic]) -> None:
    roots = {r for t in schema.topics for r in t.root_nodes}
    for node in schema.nodes:
        if node.schedule is not None and node.id not in roots:
            diags.append(
                Diagnostic(
                    "warning", "non-root-schedule", node.id,
                    "schedule on a non-root node is never consulted",
                )
            )

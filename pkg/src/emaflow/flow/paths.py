"""Static enumeration of conversation paths through a topic.

A path is the sequence of questions one session can visit, with a witness
answer per step that drives the session down that path. Steps are concrete
when the branch decision depends only on the answer and the answer space
is enumerable (likert, choice, slider-backed numeric); otherwise the step
is symbolic: the edge is listed, but no witness can prove it reachable.

Intended for validated, cycle-free schemas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..rules.ast import Value
from ..rules.evaluator import EvalContext, RuleEvalError, evaluate, free_variables
from ..rules.parser import parse_rule
from ..schema.model import EmaQuestionNode, SurveySchema
from .engine import is_valid_answer

_EPS = 1e-9


@dataclass(frozen=True)
class PathStep:
    node_id: str
    witness: Value  # answer driving this step; None when not solvable
    condition_id: Optional[str]  # edge taken; None on the final step
    symbolic: bool


@dataclass(frozen=True)
class Path:
    steps: tuple[PathStep, ...]

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(s.node_id for s in self.steps)

    @property
    def symbolic(self) -> bool:
        return any(s.symbolic for s in self.steps)


def answer_domain(schema: SurveySchema, node: EmaQuestionNode) -> Optional[list[Value]]:
    """Every valid answer value for node, or None when not enumerable."""
    spec = schema.answer(node.answer)
    if spec.validation_rule is not None:
        if "_now_" in free_variables(parse_rule(spec.validation_rule)):
            return None  # validity is time-dependent
    visual = schema.visual(node.visual_output) if node.visual_output else None
    candidates: list[Value]
    if spec.kind == "likert":
        candidates = [float(i) for i in range(11)]
    elif spec.kind == "choice":
        candidates = []
        for value in spec.synonym_map.values():
            if value not in candidates:
                candidates.append(value)
        if visual is not None and visual.kind == "buttons":
            for button in visual.buttons:
                if button.value not in candidates:
                    candidates.append(button.value)
    elif spec.kind == "numeric" and visual is not None and visual.kind == "slider":
        candidates = []
        x = visual.min
        while x <= visual.max + _EPS:
            candidates.append(float(x))
            x += visual.step
    else:
        return None
    valid = [c for c in candidates if is_valid_answer(spec, c, 0.0)]
    return valid or None


def _edge_is_concrete(cond) -> bool:
    if cond.fetch is not None:
        return False
    return free_variables(parse_rule(cond.return_rule)) <= {"_answer_"}


def _concrete_winner(schema: SurveySchema, node_id: str, answer: Value):
    """First edge whose rule holds for answer, fetch-free evaluation."""
    for cond in schema.outgoing(node_id):
        try:
            result = evaluate(parse_rule(cond.return_rule), EvalContext({"_answer_": answer}))
        except RuleEvalError:
            continue
        if result is True:
            return cond
    return None


def enumerate_paths(schema: SurveySchema, topic_id: str) -> list[Path]:
    """All paths from every root of topic_id, in deterministic order."""
    topic = schema.topic(topic_id)
    if topic is None:
        raise KeyError(f"unknown topic {topic_id!r}")
    paths: list[Path] = []
    for root in topic.root_nodes:
        _walk(schema, root, [], paths, frozenset())
    return paths


def _walk(
    schema: SurveySchema,
    node_id: str,
    prefix: list[PathStep],
    paths: list[Path],
    on_path: frozenset,
) -> None:
    if node_id in on_path:
        raise ValueError(f"conditions form a cycle through {node_id!r}")
    node = schema.node(node_id)
    outgoing = schema.outgoing(node_id)
    domain = answer_domain(schema, node)
    concrete = domain is not None and all(_edge_is_concrete(c) for c in outgoing)

    if not outgoing:
        witness = domain[0] if domain else None
        paths.append(Path(tuple(prefix) + (PathStep(node_id, witness, None, domain is None),)))
        return

    if not concrete:
        witness = domain[0] if domain else None
        for cond in outgoing:
            step = PathStep(node_id, witness, cond.id, True)
            _walk(schema, cond.target, prefix + [step], paths, on_path | {node_id})
        return

    winners: dict[str, Value] = {}  # condition id -> first witness
    fall_through: Optional[Value] = None
    have_fall_through = False
    for answer in domain:
        cond = _concrete_winner(schema, node_id, answer)
        if cond is None:
            if not have_fall_through:
                fall_through, have_fall_through = answer, True
        elif cond.id not in winners:
            winners[cond.id] = answer
    for cond in outgoing:
        if cond.id in winners:
            step = PathStep(node_id, winners[cond.id], cond.id, False)
            _walk(schema, cond.target, prefix + [step], paths, on_path | {node_id})
    if have_fall_through:
        paths.append(Path(tuple(prefix) + (PathStep(node_id, fall_through, None, False),)))

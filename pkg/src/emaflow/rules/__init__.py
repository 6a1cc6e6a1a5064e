"""Rule expression language: parsing, printing, evaluation, remote fetch."""

from .ast import BUILTINS, Binary, Call, Literal, Node, Unary, Value, Var
from .evaluator import EvalContext, RuleEvalError, evaluate, free_variables
from .fetch import (
    ALLOWED_PLACEHOLDERS,
    DataGateway,
    FetchDescriptor,
    GatewayError,
    HttpGateway,
    PLACEHOLDER_RE,
    render_url,
    run_fetch,
)
from .parser import MAX_NESTING, RuleParseError, parse_rule
from .printer import format_rule

__all__ = [
    "ALLOWED_PLACEHOLDERS",
    "BUILTINS",
    "Binary",
    "Call",
    "DataGateway",
    "EvalContext",
    "FetchDescriptor",
    "GatewayError",
    "HttpGateway",
    "Literal",
    "MAX_NESTING",
    "Node",
    "PLACEHOLDER_RE",
    "RuleEvalError",
    "RuleParseError",
    "Unary",
    "Value",
    "Var",
    "evaluate",
    "format_rule",
    "free_variables",
    "parse_rule",
    "render_url",
    "run_fetch",
]

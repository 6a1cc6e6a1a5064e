"""Iterative evaluator for rule ASTs.

Evaluation never recurses into Python stack frames proportional to AST
depth; a deep chain of unary minuses or nested parens evaluates with an
explicit work stack. All errors raise RuleEvalError naming the offending
sub-expression.

Semantics:
  - == / != are total: operands of different kinds compare unequal.
  - < <= > >= require two numbers or two strings.
  - + - * / % require numbers; / and % by zero raise. % follows Python
    float modulo (result takes the sign of the divisor).
  - && / || short-circuit and require bool operands on the paths taken.
  - ! requires bool; unary - requires a number.
  - num(x) parses a string (or passes a number through) to a finite float.
  - lower(s) / len(s) require a string; contains(a, b) requires two strings
    and tests whether b occurs in a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ast import Binary, Call, Literal, Node, Unary, Value, Var
from .printer import format_rule


class RuleEvalError(ValueError):
    """Raised when a rule cannot be evaluated over the given bindings."""


@dataclass
class EvalContext:
    """Variable bindings visible to a rule."""

    bindings: dict[str, Value] = field(default_factory=dict)


def _is_number(v: object) -> bool:
    return type(v) in (int, float)


def _show(v: Value) -> str:
    if v is None:
        return "null"
    if type(v) is bool:
        return "true" if v else "false"
    return repr(v)


def _fail(node: Node, detail: str) -> RuleEvalError:
    return RuleEvalError(f"{detail} in {format_rule(node)!r}")


def _equal(a: Value, b: Value) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if type(a) is bool or type(b) is bool:
        return type(a) is bool and type(b) is bool and a == b
    if _is_number(a) and _is_number(b):
        return float(a) == float(b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return False


def _require_bool(node: Node, v: Value, side: str) -> bool:
    if type(v) is not bool:
        raise _fail(node, f"{side} of {_op_name(node)} is {_show(v)}, not a boolean")
    return v


def _op_name(node: Node) -> str:
    if isinstance(node, Binary):
        return f"'{node.op}'"
    if isinstance(node, Unary):
        return f"'{node.op}'"
    return "expression"


def _apply_binary(node: Binary, a: Value, b: Value) -> Value:
    op = node.op
    if op == "==":
        return _equal(a, b)
    if op == "!=":
        return not _equal(a, b)
    if op in ("<", "<=", ">", ">="):
        if _is_number(a) and _is_number(b):
            x, y = float(a), float(b)
        elif isinstance(a, str) and isinstance(b, str):
            x, y = a, b  # type: ignore[assignment]
        else:
            raise _fail(node, f"cannot order {_show(a)} and {_show(b)}")
        if op == "<":
            return x < y
        if op == "<=":
            return x <= y
        if op == ">":
            return x > y
        return x >= y
    if not (_is_number(a) and _is_number(b)):
        raise _fail(node, f"arithmetic needs numbers, got {_show(a)} and {_show(b)}")
    x, y = float(a), float(b)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        if y == 0.0:
            raise _fail(node, "division by zero")
        return x / y
    if y == 0.0:
        raise _fail(node, "modulo by zero")
    return x % y


def _apply_call(node: Call, args: list[Value]) -> Value:
    if node.name == "num":
        v = args[0]
        if _is_number(v):
            return float(v)
        if isinstance(v, str):
            try:
                out = float(v.strip())
            except ValueError:
                raise _fail(node, f"num() cannot parse {_show(v)}") from None
            if not math.isfinite(out):
                raise _fail(node, f"num() got non-finite {_show(v)}")
            return out
        raise _fail(node, f"num() needs a number or string, got {_show(v)}")
    if node.name == "lower":
        v = args[0]
        if not isinstance(v, str):
            raise _fail(node, f"lower() needs a string, got {_show(v)}")
        return v.lower()
    if node.name == "len":
        v = args[0]
        if not isinstance(v, str):
            raise _fail(node, f"len() needs a string, got {_show(v)}")
        return float(len(v))
    # contains
    a, b = args
    if not (isinstance(a, str) and isinstance(b, str)):
        raise _fail(node, f"contains() needs two strings, got {_show(a)} and {_show(b)}")
    return b in a


def evaluate(node: Node, ctx: EvalContext) -> Value:
    """Evaluate an AST over ctx.bindings; raises RuleEvalError."""
    work: list[tuple[Node, int]] = [(node, 0)]
    values: list[Value] = []
    while work:
        cur, phase = work.pop()
        if isinstance(cur, Literal):
            values.append(cur.value)
        elif isinstance(cur, Var):
            if cur.name not in ctx.bindings:
                raise _fail(cur, f"unbound variable {cur.name!r}")
            v = ctx.bindings[cur.name]
            values.append(float(v) if _is_number(v) else v)
        elif isinstance(cur, Unary):
            if phase == 0:
                work.append((cur, 1))
                work.append((cur.operand, 0))
            else:
                v = values.pop()
                if cur.op == "!":
                    values.append(not _require_bool(cur, v, "operand"))
                else:
                    if not _is_number(v):
                        raise _fail(cur, f"unary '-' needs a number, got {_show(v)}")
                    values.append(-float(v))
        elif isinstance(cur, Binary):
            if cur.op in ("&&", "||"):
                if phase == 0:
                    work.append((cur, 1))
                    work.append((cur.left, 0))
                elif phase == 1:
                    left = _require_bool(cur, values.pop(), "left operand")
                    if (cur.op == "&&" and not left) or (cur.op == "||" and left):
                        values.append(left)
                    else:
                        work.append((cur, 2))
                        work.append((cur.right, 0))
                else:
                    values.append(_require_bool(cur, values.pop(), "right operand"))
            else:
                if phase == 0:
                    work.append((cur, 1))
                    work.append((cur.right, 0))
                    work.append((cur.left, 0))
                else:
                    b = values.pop()
                    a = values.pop()
                    values.append(_apply_binary(cur, a, b))
        else:  # Call
            if phase == 0:
                work.append((cur, 1))
                for arg in reversed(cur.args):
                    work.append((arg, 0))
            else:
                n = len(cur.args)
                args = values[len(values) - n :]
                del values[len(values) - n :]
                values.append(_apply_call(cur, args))
    return values[-1]


def free_variables(node: Node) -> frozenset[str]:
    """Names of all variables the rule reads."""
    out: set[str] = set()
    stack: list[Node] = [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            out.add(cur.name)
        elif isinstance(cur, Unary):
            stack.append(cur.operand)
        elif isinstance(cur, Binary):
            stack.append(cur.left)
            stack.append(cur.right)
        elif isinstance(cur, Call):
            stack.extend(cur.args)
    return frozenset(out)

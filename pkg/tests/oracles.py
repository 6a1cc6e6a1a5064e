"""Independent reference implementations used as test oracles.

Deliberately written in the most obvious style available (plain recursion,
quadratic scans) and kept free of imports from the package internals beyond
the AST node types themselves, so a bug in the production code cannot hide
in a shared helper.
"""

from __future__ import annotations

import math

from emaflow.rules.ast import Binary, Call, Literal, Unary, Var


class OracleError(Exception):
    pass


def _num(v):
    return type(v) in (int, float)


def eval_reference(node, bindings):
    """Straight recursive evaluator mirroring the documented semantics."""
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Var):
        if node.name not in bindings:
            raise OracleError("unbound")
        v = bindings[node.name]
        return float(v) if _num(v) else v
    if isinstance(node, Unary):
        if node.op == "!":
            v = eval_reference(node.operand, bindings)
            if type(v) is not bool:
                raise OracleError("! needs bool")
            return not v
        v = eval_reference(node.operand, bindings)
        if not _num(v):
            raise OracleError("- needs number")
        return -float(v)
    if isinstance(node, Call):
        args = [eval_reference(a, bindings) for a in node.args]
        if node.name == "num":
            (v,) = args
            if _num(v):
                return float(v)
            if isinstance(v, str):
                try:
                    out = float(v.strip())
                except ValueError:
                    raise OracleError("num parse") from None
                if not math.isfinite(out):
                    raise OracleError("num non-finite")
                return out
            raise OracleError("num type")
        if node.name == "lower":
            (v,) = args
            if not isinstance(v, str):
                raise OracleError("lower type")
            return v.lower()
        if node.name == "len":
            (v,) = args
            if not isinstance(v, str):
                raise OracleError("len type")
            return float(len(v))
        if node.name == "contains":
            a, b = args
            if not (isinstance(a, str) and isinstance(b, str)):
                raise OracleError("contains type")
            return b in a
        raise OracleError("unknown function")
    # Binary
    op = node.op
    if op in ("&&", "||"):
        left = eval_reference(node.left, bindings)
        if type(left) is not bool:
            raise OracleError("logic needs bool")
        if op == "&&" and not left:
            return False
        if op == "||" and left:
            return True
        right = eval_reference(node.right, bindings)
        if type(right) is not bool:
            raise OracleError("logic needs bool")
        return right
    a = eval_reference(node.left, bindings)
    b = eval_reference(node.right, bindings)
    if op in ("==", "!="):
        eq = _ref_equal(a, b)
        return eq if op == "==" else not eq
    if op in ("<", "<=", ">", ">="):
        if _num(a) and _num(b):
            a, b = float(a), float(b)
        elif isinstance(a, str) and isinstance(b, str):
            pass
        else:
            raise OracleError("order type")
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
    if not (_num(a) and _num(b)):
        raise OracleError("arith type")
    a, b = float(a), float(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise OracleError("div zero")
        return a / b
    if op == "%":
        if b == 0:
            raise OracleError("mod zero")
        return a % b
    raise OracleError("unknown op")


def _ref_equal(a, b):
    if a is None or b is None:
        return a is None and b is None
    if type(a) is bool or type(b) is bool:
        return type(a) is bool and type(b) is bool and a is b
    if _num(a) and _num(b):
        return float(a) == float(b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return False


def occurrences_in_window(events, now, interval_s):
    """Quadratic-by-construction count of events in (now - interval, now]."""
    count = 0
    for ts in events:
        if now - interval_s < ts <= now:
            count += 1
    return count


def eligible_reference(events, now, tod_s, window_start_s, window_end_s, interval_s, max_occurrences):
    """Reference eligibility decision: daily window then occurrence cap."""
    if not (window_start_s <= tod_s < window_end_s):
        return "outside_daily_window"
    if occurrences_in_window(events, now, interval_s) >= max_occurrences:
        return "occurrence_cap_reached"
    return "ok"

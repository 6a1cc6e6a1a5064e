"""Precedence-aware pretty-printer for rule ASTs.

``parse_rule(format_rule(node)) == node`` holds for every AST the parser
can produce; this is relied on by tests and by the schema editor.
"""

from __future__ import annotations

from decimal import Decimal

from .ast import Binary, Call, Literal, Node, Unary, Var

_LEVEL = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
    "+": 4, "-": 4,
    "*": 5, "/": 5, "%": 5,
}
_UNARY_LEVEL = 6
_ATOM_LEVEL = 7


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e17:
        return str(int(value))
    text = repr(value)
    if "e" in text or "E" in text:
        # The grammar has no exponent form; expand to plain decimal.
        text = format(Decimal(text), "f")
    return text


def _format_string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _level(node: Node) -> int:
    if isinstance(node, Binary):
        return _LEVEL[node.op]
    if isinstance(node, Unary):
        return _UNARY_LEVEL
    return _ATOM_LEVEL


def format_rule(node: Node) -> str:
    """Render an AST back to grammar-valid source."""
    if isinstance(node, Literal):
        v = node.value
        if v is None:
            return "null"
        if type(v) is bool:
            return "true" if v else "false"
        if isinstance(v, (int, float)):
            return _format_number(float(v))
        return _format_string(v)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return node.name + "(" + ", ".join(format_rule(a) for a in node.args) + ")"
    if isinstance(node, Unary):
        inner = format_rule(node.operand)
        if _level(node.operand) < _UNARY_LEVEL:
            inner = "(" + inner + ")"
        return node.op + inner
    level = _LEVEL[node.op]
    comparison = level == 3
    left = format_rule(node.left)
    if _level(node.left) < level or (comparison and _level(node.left) == 3):
        left = "(" + left + ")"
    right = format_rule(node.right)
    if _level(node.right) <= level:
        right = "(" + right + ")"
    return f"{left} {node.op} {right}"

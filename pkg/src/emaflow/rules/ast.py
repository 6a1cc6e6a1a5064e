"""AST node types for the rule expression language.

Rules are small, total expressions: no loops, no assignment, no user
functions. Values are scalars only: float, str, bool, or None.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# Scalar value space of the language. bool must be checked before float
# everywhere, since bool is an int subclass in Python.
Value = Union[float, str, bool, None]

UNARY_OPS = ("!", "-")
BINARY_OPS = ("||", "&&", "==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/", "%")

# name -> arity
BUILTINS = {"num": 1, "lower": 1, "len": 1, "contains": 2}


@dataclass(frozen=True)
class Literal:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Union[Literal, Var, Unary, Binary, Call]

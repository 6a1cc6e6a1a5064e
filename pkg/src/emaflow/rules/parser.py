"""Tokenizer and recursive-descent parser for rule expressions.

Grammar (precedence low to high):

    expr    := or
    or      := and ("||" and)*
    and     := cmp ("&&" cmp)*
    cmp     := add (("=="|"!="|"<"|"<="|">"|">=") add)?
    add     := mul (("+"|"-") mul)*
    mul     := unary (("*"|"/"|"%") unary)*
    unary   := ("!"|"-") unary | primary
    primary := number | string | "true" | "false" | "null"
             | ident | ident "(" args ")" | "(" expr ")"

Strings are double-quoted with ``\\"`` and ``\\\\`` escapes. Comparison is
non-associative (``a < b < c`` is a parse error).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import BUILTINS, Binary, Call, Literal, Node, Unary, Var

# Nested sub-expressions (parens, unary chains, call args) recurse through
# the full precedence ladder; this bound keeps the parser well inside the
# interpreter stack limit. Real rules are a handful of levels deep.
MAX_NESTING = 100


class RuleParseError(ValueError):
    """Raised when rule source does not match the grammar."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"at offset {offset}: {message}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


@dataclass(frozen=True)
class _Token:
    kind: str  # num | str | ident | op | punct | eof
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\|\||&&|==|!=|<=|>=|<|>|\+|-|\*|/|%|!)
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(source)
    while pos < n:
        ch = source[pos]
        if ch == '"':
            text, pos = _lex_string(source, pos)
            tokens.append(_Token("str", text, pos))
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise RuleParseError(f"unexpected character {ch!r}", pos)
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        tokens.append(_Token(kind, m.group(), m.start()))
    tokens.append(_Token("eof", "", n))
    return tokens


def _lex_string(source: str, start: int) -> tuple[str, int]:
    # Returns the decoded string value and the position past the closing quote.
    out: list[str] = []
    pos = start + 1
    while pos < len(source):
        ch = source[pos]
        if ch == "\\":
            if pos + 1 >= len(source):
                break
            esc = source[pos + 1]
            if esc not in ('"', "\\"):
                raise RuleParseError(f"invalid escape \\{esc}", pos)
            out.append(esc)
            pos += 2
        elif ch == '"':
            return "".join(out), pos + 1
        else:
            out.append(ch)
            pos += 1
    raise RuleParseError("unterminated string", start)


_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.depth = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind or tok.text != text:
            raise RuleParseError(f"got {tok.text or 'end of input'!r}", tok.offset, (text,))
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise RuleParseError(f"trailing input {tok.text!r}", tok.offset, ("end of input",))
        return node

    def expr(self) -> Node:
        return self.or_()

    def or_(self) -> Node:
        node = self.and_()
        while self.peek().text == "||":
            self.advance()
            node = Binary("||", node, self.and_())
        return node

    def and_(self) -> Node:
        node = self.cmp()
        while self.peek().text == "&&":
            self.advance()
            node = Binary("&&", node, self.cmp())
        return node

    def cmp(self) -> Node:
        node = self.add()
        tok = self.peek()
        if tok.kind == "op" and tok.text in _CMP_OPS:
            self.advance()
            node = Binary(tok.text, node, self.add())
        return node

    def add(self) -> Node:
        node = self.mul()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.advance().text
            node = Binary(op, node, self.mul())
        return node

    def mul(self) -> Node:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/", "%"):
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("!", "-"):
            self.advance()
            self._enter(tok.offset)
            operand = self.unary()
            self.depth -= 1
            return Unary(tok.text, operand)
        return self.primary()

    def primary(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Literal(float(tok.text))
        if tok.kind == "str":
            self.advance()
            return Literal(tok.text)
        if tok.kind == "ident":
            self.advance()
            if tok.text == "true":
                return Literal(True)
            if tok.text == "false":
                return Literal(False)
            if tok.text == "null":
                return Literal(None)
            if self.peek().text == "(":
                return self.call(tok)
            return Var(tok.text)
        if tok.text == "(":
            self.advance()
            self._enter(tok.offset)
            node = self.expr()
            self.depth -= 1
            self.expect("punct", ")")
            return node
        raise RuleParseError(
            f"got {tok.text or 'end of input'!r}",
            tok.offset,
            ("number", "string", "identifier", "'('"),
        )

    def call(self, name_tok: _Token) -> Node:
        if name_tok.text not in BUILTINS:
            raise RuleParseError(f"unknown function {name_tok.text!r}", name_tok.offset)
        self.expect("punct", "(")
        self._enter(name_tok.offset)
        args: list[Node] = []
        if self.peek().text != ")":
            args.append(self.expr())
            while self.peek().text == ",":
                self.advance()
                args.append(self.expr())
        self.depth -= 1
        self.expect("punct", ")")
        arity = BUILTINS[name_tok.text]
        if len(args) != arity:
            raise RuleParseError(
                f"{name_tok.text} takes {arity} argument(s), got {len(args)}", name_tok.offset
            )
        return Call(name_tok.text, tuple(args))

    def _enter(self, offset: int) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise RuleParseError("expression too deeply nested", offset)


def parse_rule(source: str) -> Node:
    """Parse rule source into an AST; raises RuleParseError with offset."""
    return _Parser(_lex(source)).parse()

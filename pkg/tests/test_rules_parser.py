"""Parser unit tests: grammar shape, precedence, errors, round-trip."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emaflow.rules import (
    Binary,
    Call,
    Literal,
    MAX_NESTING,
    RuleParseError,
    Unary,
    Var,
    format_rule,
    parse_rule,
)


def test_number_literal_is_float():
    assert parse_rule("42") == Literal(42.0)
    assert parse_rule("3.5") == Literal(3.5)


def test_keyword_literals():
    assert parse_rule("true") == Literal(True)
    assert parse_rule("false") == Literal(False)
    assert parse_rule("null") == Literal(None)


def test_string_escapes():
    assert parse_rule(r'"a\"b\\c"') == Literal('a"b\\c')


def test_precedence_mul_over_add():
    assert parse_rule("1 + 2 * 3") == Binary(
        "+", Literal(1.0), Binary("*", Literal(2.0), Literal(3.0))
    )


def test_precedence_and_over_or():
    ast = parse_rule("a || b && c")
    assert ast == Binary("||", Var("a"), Binary("&&", Var("b"), Var("c")))


def test_unary_binds_tighter_than_mul():
    assert parse_rule("-a * b") == Binary("*", Unary("-", Var("a")), Var("b"))


def test_left_associativity():
    assert parse_rule("1 - 2 - 3") == Binary(
        "-", Binary("-", Literal(1.0), Literal(2.0)), Literal(3.0)
    )


def test_comparison_is_non_associative():
    with pytest.raises(RuleParseError):
        parse_rule("1 < 2 < 3")
    # Parenthesized form is fine.
    parse_rule("(1 < 2) == true")


def test_call_parsing_and_arity():
    assert parse_rule('contains(x, "a")') == Call("contains", (Var("x"), Literal("a")))
    with pytest.raises(RuleParseError):
        parse_rule("num(1, 2)")
    with pytest.raises(RuleParseError):
        parse_rule("contains(x)")


def test_unknown_function_rejected():
    with pytest.raises(RuleParseError):
        parse_rule("shout(x)")


def test_builtin_name_without_call_is_a_variable():
    assert parse_rule("num") == Var("num")


def test_error_carries_offset():
    with pytest.raises(RuleParseError) as err:
        parse_rule("1 + ")
    assert err.value.offset == 4

    with pytest.raises(RuleParseError) as err:
        parse_rule("1 @ 2")
    assert err.value.offset == 2


def test_trailing_input_rejected():
    with pytest.raises(RuleParseError):
        parse_rule("1 2")


def test_unterminated_string():
    with pytest.raises(RuleParseError):
        parse_rule('"abc')


def test_invalid_escape():
    with pytest.raises(RuleParseError):
        parse_rule(r'"a\n"')


def test_nesting_bound():
    ok = "(" * (MAX_NESTING - 1) + "1" + ")" * (MAX_NESTING - 1)
    parse_rule(ok)
    too_deep = "(" * (MAX_NESTING + 1) + "1" + ")" * (MAX_NESTING + 1)
    with pytest.raises(RuleParseError):
        parse_rule(too_deep)


def test_whitespace_insensitive():
    assert parse_rule("1+2*3") == parse_rule(" 1 +  2\t*\n3 ")


def test_double_negation_round_trips():
    ast = parse_rule("--x")
    assert ast == Unary("-", Unary("-", Var("x")))
    assert parse_rule(format_rule(ast)) == ast


_ident = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,8}", fullmatch=True).filter(
    lambda s: s not in ("true", "false", "null")
)

_leaf = st.one_of(
    st.integers(min_value=0, max_value=10**6).map(lambda n: Literal(float(n))),
    st.floats(min_value=0, max_value=1e9, allow_nan=False).map(Literal),
    st.text(max_size=12).map(Literal),
    st.sampled_from([Literal(True), Literal(False), Literal(None)]),
    _ident.map(Var),
)


def _compound(children):
    unary = st.builds(Unary, st.sampled_from(["!", "-"]), children)
    binary = st.builds(
        Binary,
        st.sampled_from(["||", "&&", "==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/", "%"]),
        children,
        children,
    )
    call_one = st.builds(
        lambda name, a: Call(name, (a,)), st.sampled_from(["num", "lower", "len"]), children
    )
    call_two = st.builds(lambda a, b: Call("contains", (a, b)), children, children)
    return st.one_of(unary, binary, call_one, call_two)


ast_strategy = st.recursive(_leaf, _compound, max_leaves=25)


@settings(max_examples=300, deadline=None)
@given(ast_strategy)
def test_format_parse_round_trip(ast):
    assert parse_rule(format_rule(ast)) == ast

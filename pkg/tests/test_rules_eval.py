"""Evaluator unit tests, checked against the recursive reference oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emaflow.rules import (
    EvalContext,
    RuleEvalError,
    Unary,
    Var,
    evaluate,
    free_variables,
    parse_rule,
)
from oracles import OracleError, eval_reference
from test_rules_parser import ast_strategy


def ev(src, **bindings):
    return evaluate(parse_rule(src), EvalContext(bindings))


def test_arithmetic():
    assert ev("1 + 2 * 3") == 7.0
    assert ev("(1 + 2) * 3") == 9.0
    assert ev("7 % 3") == 1.0
    assert ev("-7 % 3") == 2.0  # Python modulo: sign of divisor
    assert ev("1 / 4") == 0.25


def test_division_by_zero():
    with pytest.raises(RuleEvalError):
        ev("1 / 0")
    with pytest.raises(RuleEvalError):
        ev("1 % 0")


def test_equality_is_total_across_types():
    assert ev('1 == "1"') is False
    assert ev('1 != "1"') is True
    assert ev("true == 1") is False
    assert ev("null == null") is True
    assert ev("null == 0") is False
    assert ev('"a" == "a"') is True


def test_ordering_requires_matching_kinds():
    assert ev("2 < 10") is True
    assert ev('"abc" < "abd"') is True
    with pytest.raises(RuleEvalError):
        ev('1 < "2"')
    with pytest.raises(RuleEvalError):
        ev("true < false")


def test_logic_short_circuits():
    # The right side would raise if evaluated.
    assert ev("false && 1 / 0 == 1") is False
    assert ev("true || 1 / 0 == 1") is True
    with pytest.raises(RuleEvalError):
        ev("true && 5")
    with pytest.raises(RuleEvalError):
        ev("1 || true")


def test_not_requires_bool():
    assert ev("!false") is True
    with pytest.raises(RuleEvalError):
        ev("!0")


def test_variables():
    assert ev("_answer_ + 1", _answer_=4) == 5.0
    assert ev("_answer_", _answer_="yes") == "yes"
    with pytest.raises(RuleEvalError) as err:
        ev("missing + 1")
    assert "missing" in str(err.value)


def test_int_bindings_become_floats():
    assert evaluate(Var("x"), EvalContext({"x": 3})) == 3.0
    assert type(evaluate(Var("x"), EvalContext({"x": 3}))) is float


def test_builtins():
    assert ev('num("3.5")') == 3.5
    assert ev('num(" 2 ")') == 2.0
    assert ev("num(4)") == 4.0
    assert ev('lower("YeS")') == "yes"
    assert ev('len("abc")') == 3.0
    assert ev('contains("seldom", "dom")') is True
    assert ev('contains("seldom", "xyz")') is False


def test_builtin_type_errors():
    with pytest.raises(RuleEvalError):
        ev('num("not a number")')
    with pytest.raises(RuleEvalError):
        ev('num("inf")')
    with pytest.raises(RuleEvalError):
        ev("lower(3)")
    with pytest.raises(RuleEvalError):
        ev("len(null)")
    with pytest.raises(RuleEvalError):
        ev('contains("a", 1)')


def test_error_names_offending_subexpression():
    with pytest.raises(RuleEvalError) as err:
        ev('1 + (2 * "x")')
    assert '2 * "x"' in str(err.value)


def test_deep_unary_chain_does_not_recurse():
    node = Var("x")
    for _ in range(10000):
        node = Unary("-", node)
    assert evaluate(node, EvalContext({"x": 1.0})) == 1.0


def test_free_variables():
    ast = parse_rule("contains(a, b) && _answer_ > c + c")
    assert free_variables(ast) == frozenset({"a", "b", "_answer_", "c"})
    assert free_variables(parse_rule("1 + 2")) == frozenset()


_binding_values = st.one_of(
    st.floats(min_value=-100, max_value=100, allow_nan=False),
    st.integers(min_value=-5, max_value=5),
    st.sampled_from(["yes", "no", "3", "abc", ""]),
    st.booleans(),
    st.none(),
)


@settings(max_examples=400, deadline=None)
@given(ast_strategy, st.dictionaries(st.sampled_from(["a", "b", "x", "_answer_"]), _binding_values))
def test_evaluate_matches_reference_oracle(ast, bindings):
    try:
        expected = eval_reference(ast, bindings)
        failed = False
    except OracleError:
        failed = True
    if failed:
        with pytest.raises(RuleEvalError):
            evaluate(ast, EvalContext(dict(bindings)))
    else:
        got = evaluate(ast, EvalContext(dict(bindings)))
        if isinstance(expected, float):
            assert got == pytest.approx(expected, nan_ok=True)
        else:
            assert got == expected and type(got) is type(expected)

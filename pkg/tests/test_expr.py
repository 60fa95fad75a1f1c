import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projschwarz.errors import EvaluationError, ParseError
from projschwarz.expr import parse_expression


def test_polynomial_expression_jet():
    f = parse_expression("x1 + x2^2", 2)
    j = f.jet([1.0, 2.0], 2)
    assert j.value == pytest.approx(5.0)
    assert np.allclose(j.gradient().value, [1.0, 4.0])
    assert np.allclose(np.diag(j.gradient().gradient().value), [0.0, 2.0])


def test_constant():
    f = parse_expression("3", 2)
    assert f.jet([0.1, 0.2], 2).to_dict() == {(0, 0): 3.0}


def test_division_by_zero_at_evaluation():
    f = parse_expression("1/(x1+1)", 1)
    assert f.jet([0.0], 1).value == pytest.approx(1.0)
    with pytest.raises(EvaluationError):
        f.jet([-1.0], 1)


def test_unary_minus_binds_tighter_than_power():
    f = parse_expression("-x1^2", 1)
    assert f.jet([3.0], 0).value == pytest.approx(9.0)
    g = parse_expression("0 - x1^2", 1)
    assert g.jet([3.0], 0).value == pytest.approx(-9.0)


def test_precedence_and_associativity():
    f = parse_expression("1 - 2 - 3 * x1 / 2", 1)
    assert f.jet([2.0], 0).value == pytest.approx(-4.0)


@pytest.mark.parametrize(
    "src, n",
    [("x3", 2), ("x0", 1), ("1 +", 1), ("(x1", 1), ("x1 ^ 1.5", 1), ("2 $ 3", 1), ("y", 1)],
)
def test_syntax_errors(src, n):
    with pytest.raises(ParseError):
        parse_expression(src, n)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_expression("x1 + * 2", 1)
    assert info.value.position == 5


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-2, 2),
    st.floats(-2, 2),
    st.floats(0.1, 3),
    st.integers(0, 4),
)
def test_matches_float_arithmetic(a, b, c, k):
    src = f"({a!r}*x1 - x2)^{k} + x1*x2/({c!r} + x1^2)"
    f = parse_expression(src, 2)
    x1, x2 = 0.3, -0.8
    want = (a * x1 - x2) ** k + x1 * x2 / (c + x1**2)
    assert f.jet([x1, x2], 0).value == pytest.approx(want, rel=1e-12, abs=1e-12)

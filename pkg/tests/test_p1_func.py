"""Unit tests for divisor-form rational functions and their jets.

The derivative evaluator is cross-checked against sympy, an independent
differentiation oracle, at exact rational points.
"""

from fractions import Fraction

import pytest
import sympy

from merofock.errors import PoleAtPoint
from merofock.exact_arith import ONE, QNUM, Scalar
from merofock.p1_func import DivisorFunction, eval_deriv, parse_divisor


def q(n, d=1):
    return Scalar.from_q(QNUM(n, d))


def _sympy_of(const, divisor):
    z = sympy.Symbol("z")
    expr = sympy.Rational(str(const))
    for point, mult in divisor.items():
        expr *= (z - sympy.Rational(str(point))) ** mult
    return z, expr


CASES = [
    (q(1), {q(2): 1, q(3): -1}),
    (q(-3, 2), {q(0): 2, q(1, 2): -1, q(5): -2}),
    (q(7), {q(-1): 1, q(1): 1, q(4): -3}),
]


@pytest.mark.parametrize("const,div", CASES)
def test_eval_deriv_matches_sympy(const, div):
    xi = DivisorFunction(const, dict(div))
    z, expr = _sympy_of(const, div)
    for t in (q(6), q(-2, 3), q(9, 4)):
        for k in range(4):
            got = eval_deriv(xi, t, k)
            want = sympy.diff(expr, z, k).subs(z, sympy.Rational(str(t)))
            assert Fraction(str(got)) == Fraction(want.p, want.q), (t, k)


def test_eval_at_pole_raises():
    xi = DivisorFunction(ONE, {q(3): -1})
    with pytest.raises(PoleAtPoint):
        eval_deriv(xi, q(3), 0)


def test_linear():
    s = Scalar.param("s")
    xi = DivisorFunction.linear(s)
    t = Scalar.param("t")
    assert eval_deriv(xi, t, 0) == t - s
    assert eval_deriv(xi, t, 1) == ONE
    assert not eval_deriv(xi, t, 2)


def test_multiplicative_structure():
    a = DivisorFunction(q(2), {q(1): 1})
    b = DivisorFunction(q(3), {q(1): 1, q(4): -2})
    t = q(7)
    prod_val = eval_deriv(a, t, 0) * eval_deriv(b, t, 0)
    from merofock.p1_func import df_mul, df_inv
    assert eval_deriv(df_mul(a, b), t, 0) == prod_val
    assert eval_deriv(df_inv(a), t, 0) * eval_deriv(a, t, 0) == ONE


def test_parse_divisor_round_trip():
    for text in ("(z-2)/(z-3)", "z-1/2", "5*(z-1)^2/(z+3)", "-z"):
        xi = parse_divisor(text)
        t = q(10)
        again = parse_divisor(str(xi))
        assert eval_deriv(again, t, 0) == eval_deriv(xi, t, 0)
        assert eval_deriv(again, t, 1) == eval_deriv(xi, t, 1)


def test_symbolic_point_derivatives():
    # quotient rule at a symbolic point
    s = Scalar.param("s")
    xi = DivisorFunction(ONE, {q(0): -1})   # 1/z
    assert eval_deriv(xi, s, 0) == ONE / s
    assert eval_deriv(xi, s, 1) == -ONE / (s * s)
    assert eval_deriv(xi, s, 2) == q(2) / (s * s * s)

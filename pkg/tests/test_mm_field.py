"""Unit tests for the field of functionals on meromorphic functions."""

import pytest
from hypothesis import given, settings, strategies as st

from merofock.errors import DivisionByZero, ExprSyntaxError
from merofock.exact_arith import ONE, Scalar
from merofock.mm_field import (
    MM_ONE, MM_ZERO, MMElement, NOT_HOMOGENEOUS, homogeneity_degree, parse_mm,
    support,
)


def ev(name, k):
    return MMElement.ev(Scalar.param(name), k)


atoms = st.one_of(
    st.builds(ev, st.sampled_from(["a", "b"]), st.integers(0, 2)),
    st.builds(lambda n: MMElement.const(Scalar.from_int(n)),
              st.integers(-5, 5)),
)


@st.composite
def elements(draw, depth=2):
    if depth == 0:
        return draw(atoms)
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return draw(atoms)
    x = draw(elements(depth=depth - 1))
    y = draw(elements(depth=depth - 1))
    return (x + y, x - y, x * y)[kind - 1]


@settings(max_examples=50, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == MM_ZERO
    assert x * MM_ONE == x


@settings(max_examples=40, deadline=None)
@given(elements())
def test_str_round_trip(x):
    assert parse_mm(str(x)) == x


@settings(max_examples=30, deadline=None)
@given(elements())
def test_inverse(x):
    if not x:
        with pytest.raises(DivisionByZero):
            MM_ONE / x
    else:
        assert (MM_ONE / x) * x == MM_ONE


def test_parse_examples():
    battery = ["E[a;0]", "E[a;1]/E[b;0]", "1/E[a;0]",
               "E[a;0] + E[b;1]", "3*E[a;0]*E[b;0]*E[c;0]"]
    for text in battery:
        assert parse_mm(text) == parse_mm(str(parse_mm(text)))
    with pytest.raises(ExprSyntaxError):
        parse_mm("E[a;]")
    with pytest.raises(ExprSyntaxError):
        parse_mm("E[a;0")


def test_support():
    a, b = Scalar.param("a"), Scalar.param("b")
    F = MMElement.ev(a, 0) * MMElement.ev(b, 2) + MMElement.ev(a, 1)
    assert support(F) == {a, b}
    assert support(MM_ONE) == set()


def test_homogeneity_degree():
    # degree counts each evaluation symbol once, regardless of jet order
    assert homogeneity_degree(parse_mm("E[a;0]*E[b;1]")) == 2
    assert homogeneity_degree(parse_mm("1/E[a;0]")) == -1
    assert homogeneity_degree(parse_mm("E[a;1]/E[b;0]")) == 0
    assert homogeneity_degree(MM_ONE) == 0
    assert homogeneity_degree(parse_mm("E[a;0] + 1")) is NOT_HOMOGENEOUS


def test_rational_point_symbols():
    F = parse_mm("E[1/2;0]^2")
    assert support(F) == {ONE / Scalar.from_int(2)}
    assert parse_mm(str(F)) == F

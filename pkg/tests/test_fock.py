"""Unit tests for the Fock space, localization, and vertex fields."""

import pytest
from hypothesis import given, settings, strategies as st

from merofock.errors import NotInFockSubring, WindowTooSmall
from merofock.exact_arith import ONE, QNUM, Scalar
from merofock.fock import (
    FOCK_ONE, FOCK_T, FOCK_ZERO, FockElement, G_table, GTableCache,
    anticommutator, basis_battery, field_coefficient, localize, parse_fock,
    unlocalize, vertex_apply,
)
from merofock.mm_field import parse_mm


def q(n, d=1):
    return Scalar.from_q(QNUM(n, d))


atoms = st.one_of(
    st.builds(FockElement.T_power, st.integers(-2, 2)),
    st.builds(FockElement.t, st.integers(1, 4)),
    st.builds(lambda n: FockElement.const(n), st.integers(-4, 4)),
)


@st.composite
def vectors(draw, depth=2):
    if depth == 0:
        return draw(atoms)
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return draw(atoms)
    x = draw(vectors(depth=depth - 1))
    y = draw(vectors(depth=depth - 1))
    return (x + y, x - y, x * y)[kind - 1]


@settings(max_examples=50, deadline=None)
@given(vectors(), vectors(), vectors())
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == FOCK_ZERO
    assert x * FOCK_ONE == x


@settings(max_examples=40, deadline=None)
@given(vectors())
def test_localization_round_trip(v):
    assert localize(unlocalize(v)) == v


@settings(max_examples=40, deadline=None)
@given(vectors())
def test_parse_round_trip(v):
    assert parse_fock(str(v)) == v


def test_unlocalize_generators():
    # T is the value symbol at 0; t-variables are log-jet coordinates
    assert unlocalize(FOCK_T) == parse_mm("E[0;0]")
    assert unlocalize(FockElement.T_power(-2)) == parse_mm("1/E[0;0]^2")
    assert localize(parse_mm("E[0;1]")) == FOCK_T * FockElement.t(1)


def test_localize_rejects_other_support():
    with pytest.raises(NotInFockSubring):
        localize(parse_mm("E[1;0]"))


def test_diff_and_euler():
    v = parse_fock("T^2*t1^2*t3 + T^-1*t2")
    assert v.diff_t(1) == parse_fock("2*T^2*t1*t3")
    assert v.diff_t(2) == parse_fock("T^-1")
    assert v.diff_t(3) == parse_fock("T^2*t1^2")
    assert v.euler_T() == parse_fock("2*T^2*t1^2*t3 - T^-1*t2")


def test_basis_battery_shape():
    batt = basis_battery((-1, 1), 2, 2)
    assert FOCK_ONE in batt and FOCK_T in batt
    grades = {v.grade() for v in batt}
    assert grades == {-1, 0, 1}
    assert all(v.t_degree() <= 2 for v in batt)
    # monomial count: 3 grades x t-monomials in t1, t2 of degree <= 2
    assert len(batt) == 3 * 6


def test_vertex_window_enforced():
    series = vertex_apply("psi", FOCK_ONE, (-2, 2))
    with pytest.raises(WindowTooSmall):
        series.coefficient(3)
    with pytest.raises(WindowTooSmall):
        vertex_apply("psi", FOCK_ONE, (2, -2))
    with pytest.raises(ValueError):
        vertex_apply("nope", FOCK_ONE, (0, 0))


def test_field_linearity():
    v = parse_fock("t1*T") + parse_fock("3*t2")
    for field in ("psi", "psi_plus", "phi"):
        for k in (-2, 0, 1):
            a = field_coefficient(field, k, parse_fock("t1*T"))
            b = field_coefficient(field, k, parse_fock("3*t2"))
            assert field_coefficient(field, k, v) == a + b


def test_field_coefficient_symbolic_scalars():
    # symbolic coefficients take the slow path; results must agree with
    # scaling the rational-coefficient result
    a = Scalar.param("a")
    v = parse_fock("t1*T^-1").scale(a)
    for k in (-1, 0, 2):
        got = field_coefficient("psi", k, v)
        want = field_coefficient("psi", k, parse_fock("t1*T^-1")).scale(a)
        assert got == want


def test_anticommutator_entry():
    # {psi_0, psi+_{-1}} = -1 on any vector
    for v in (FOCK_ONE, FOCK_T, parse_fock("t2*T^-1")):
        assert anticommutator("psi", "psi_plus", 0, -1, v) == -v
        assert anticommutator("psi", "psi_plus", 0, 0, v) == FOCK_ZERO


def test_g_table_cache_consistency():
    cache = GTableCache((-2, 2), (-2, 2))
    for text in ("1", "T", "t1*T^-1", "t2 + 3*t1^2"):
        v = parse_fock(text)
        direct = G_table("smooth", v, (-2, 2), (-2, 2))
        assert cache.table("smooth", v) == direct

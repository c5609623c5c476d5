"""Unit tests for semigeometric/jet operators, composition, and fusion."""

import pytest

from merofock.errors import DomainViolation, ExprSyntaxError
from merofock.conformal_ops import (
    IDENTITY_OP, apply, commutator_report, compose, fine_residue, fusion,
    make_E, make_Gcal, make_M, make_psi, make_psi_plus, mm_laurent_series,
    parse_operator, singular_locus,
)
from merofock.exact_arith import ONE, QNUM, Scalar, parse_scalar
from merofock.mm_field import MMElement, parse_mm
from merofock.p1_func import DivisorFunction, parse_divisor


def q(n, d=1):
    return Scalar.from_q(QNUM(n, d))


def test_multiplier_scales_by_value():
    op = parse_operator("M[(z-2)/(z-3)]")
    got = apply(op, parse_mm("E[1;0]"))
    assert got == parse_mm("1/2 * E[1;0]")
    assert str(got) == "1/2*E[1;0]"


def test_multiplier_leibniz_on_jets():
    # first-jet symbols pick up a derivative term
    op = parse_operator("M[z-3]")
    got = apply(op, parse_mm("E[1;1]"))
    assert got == parse_mm("-2*E[1;1] + E[1;0]")


def test_domain_violation_names_the_point():
    op = parse_operator("M[z-1]")
    with pytest.raises(DomainViolation) as info:
        apply(op, parse_mm("E[1;0]"))
    assert "1" in str(info.value)


def test_partiality_is_support_sensitive():
    op = parse_operator("M[z-1]")
    # the same operator acts fine away from its zero
    assert apply(op, parse_mm("E[4;0]")) == parse_mm("3*E[4;0]")


def test_evaluation_inserts_symbol():
    z = Scalar.param("z")
    got = apply(make_E(z), parse_mm("E[a;0]"))
    assert got == MMElement.ev(z, 0) * parse_mm("E[a;0]")


def test_exchange_relation():
    # M_xi E_z = xi(z) E_z M_xi as operators
    z = Scalar.param("z")
    xi = parse_divisor("(z-2)/(z-3)")
    lhs = compose(make_M(xi), make_E(z))
    rhs = compose(make_E(z), make_M(xi))
    F = parse_mm("E[a;0]*E[b;1]")
    val = MMElement.const((z - q(2)) / (z - q(3)))
    assert apply(lhs, F) == val * apply(rhs, F)


def test_commutator_report_vanishes_for_multipliers():
    a = make_M(parse_divisor("z-5"))
    b = make_M(parse_divisor("(z-2)/(z-3)"))
    verdict, detail = commutator_report(a, b, parse_mm("E[1;1]"))
    assert verdict == "equal" and detail is None


def test_singular_locus_of_pair_fields():
    r, s = Scalar.param("r"), Scalar.param("s")
    locus = singular_locus(make_psi(r), make_psi_plus(s))
    assert locus  # the composition is singular along r = s


def test_identity_fusion():
    r, s = Scalar.param("r"), Scalar.param("s")
    fused = fusion(make_psi(r), make_psi_plus(s), "s", r, 1)
    for text in ("E[a;0]", "E[a;1]/E[b;0]", "1/E[a;0]"):
        F = parse_mm(text)
        assert apply(fused, F) == F


def test_diagonal_residue_of_pair_field():
    zp, zm = Scalar.param("zp"), Scalar.param("zm")
    g = make_Gcal(zp, zm)
    F = parse_mm("E[a;0]*E[b;0]")
    assert fine_residue(g, "zp", zm, 1, F) == -F


def test_mm_laurent_series_valuation():
    u = Scalar.param("u")
    F = MMElement.const(ONE / (u * u)) * parse_mm("E[a;0]")
    ser = mm_laurent_series(F, "u", 0)
    assert ser.valuation() == -2
    assert ser.coefficient(-2) == parse_mm("E[a;0]")
    assert ser.coefficient(0) == parse_mm("0")


def test_parse_operator_errors():
    with pytest.raises(ExprSyntaxError):
        parse_operator("M[(z-2]")
    with pytest.raises(ExprSyntaxError):
        parse_operator("Q[z]")


def test_identity_operator():
    F = parse_mm("E[a;0] + 1/E[b;0]")
    assert apply(IDENTITY_OP, F) == F
    assert apply(compose(IDENTITY_OP, IDENTITY_OP), F) == F


def test_compose_associativity_on_elements():
    ops = [make_M(parse_divisor("z-5")),
           make_E(Scalar.param("w")),
           make_M(parse_divisor("1/(z-6)"))]
    F = parse_mm("E[a;1]")
    left = compose(compose(ops[0], ops[1]), ops[2])
    right = compose(ops[0], compose(ops[1], ops[2]))
    assert apply(left, F) == apply(right, F)

"""Unit tests for the finite configuration-space boson-fermion transport."""

import pytest

from merofock.bf_config import (
    ConfigPolynomial, SkewPolynomial, boson_create, discriminant_value,
    elementary_symmetric, fermion_create, fock_consistency, pi_value,
    skew_oracle_check,
)
from merofock.exact_arith import ONE, QNUM, Scalar, ZERO
from merofock.fock import FOCK_ONE, FOCK_T, parse_fock


def q(n, d=1):
    return Scalar.from_q(QNUM(n, d))


def test_elementary_symmetric():
    roots = [q(1), q(2), q(3)]
    es = elementary_symmetric(roots)
    assert es == [q(6), q(11), q(6)]


def test_config_polynomial_evaluation():
    # sigma_k evaluated on a root multiset equals e_k of the roots
    roots = [q(2), q(-1), q(5)]
    es = elementary_symmetric(roots)
    for k in (1, 2, 3):
        p = ConfigPolynomial.sigma(3, k)
        assert p.evaluate_at_roots(roots) == es[k - 1]


def test_config_polynomial_ring():
    s1 = ConfigPolynomial.sigma(2, 1)
    s2 = ConfigPolynomial.sigma(2, 2)
    c = ConfigPolynomial.const(2, q(3))
    assert (s1 + s2) * c == c * s1 + s2 * c
    assert s1 * s1 - s1 * s1 == ConfigPolynomial.const(2, ZERO)


def test_discriminant_antisymmetry():
    roots = [q(1), q(4), q(9)]
    swapped = [q(4), q(1), q(9)]
    assert discriminant_value(roots) == -discriminant_value(swapped)
    assert not discriminant_value([q(1), q(1), q(2)])


def test_boson_create_pullback():
    # sigma'_k = sigma_k + z0 sigma_{k-1} on the enlarged configuration
    z0 = q(7)
    f = ConfigPolynomial.sigma(3, 2)
    g = boson_create(z0, f)  # lives on size-2 configurations
    roots = [q(1), q(-2)]
    want = ConfigPolynomial.sigma(3, 2).evaluate_at_roots(roots + [z0])
    assert g.evaluate_at_roots(roots) == want


def test_pi_value():
    # pi(z0) on a size-n configuration is prod (z0 - z_i) in sigma form
    z0 = q(4)
    p = pi_value(2, z0)
    roots = [q(1), q(2)]
    assert p.evaluate_at_roots(roots) == (z0 - q(1)) * (z0 - q(2))


def test_skew_polynomial_antisymmetry():
    part = ConfigPolynomial.sigma(3, 1) + ConfigPolynomial.const(3, q(2))
    skew = SkewPolynomial(3, part)
    roots = [q(1), q(5), q(-3)]
    assert skew.skew_check(roots, 0, 2)
    assert skew.skew_check(roots, 1, 2)
    # a repeated slot kills the value: inserting a point twice gives zero
    assert not skew.evaluate_at_roots([q(1), q(1), q(-3)])


def test_skew_oracle_symbolic_and_random():
    p = (ConfigPolynomial.sigma(3, 1) * ConfigPolynomial.sigma(3, 2)
         + ConfigPolynomial.const(3, q(5)))
    rep = skew_oracle_check(q(2), p, samples=10, seed=1)
    assert rep["ok"], rep["mismatches"][:2]


def test_fock_consistency_ratio_is_ground_product():
    for v in (FOCK_ONE, FOCK_T, parse_fock("t1*T")):
        rep = fock_consistency(q(3), v, K=2)
        assert rep["ok"], rep
    # different creation points give different constants
    r1 = fock_consistency(q(3), FOCK_ONE, K=2)
    r2 = fock_consistency(q(4), FOCK_ONE, K=2)
    assert r1["ratio"] != r2["ratio"]

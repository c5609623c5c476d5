"""Finite configuration spaces and the discriminant correspondence.

States of n bosons on a line are monic degree-n polynomials pi(z) =
z^n - sigma_1 z^(n-1) + ... +- sigma_n; polynomial functions on that
space are polynomials in the elementary symmetric coordinates sigma_k.
Fermion states are carried to boson states by dividing out the
discriminant Disc = prod_{i<j}(z_i - z_j); creation operators act on
functions by pulling back along pi -> (z - z0) pi, with the fermionic one
picking up the factor pi(z0).
"""

import random

from ._poly import Domain, SparsePoly
from .errors import BadConfig
from .exact_arith import ONE, QNUM, ZERO, Scalar
from .fock import unlocalize
from .p1_func import DivisorFunction, eval_deriv

_DOM = Domain(ZERO, ONE)


class ConfigPolynomial:
    """Polynomial function on the space of monic degree-n polynomials."""

    __slots__ = ("n", "poly")

    def __init__(self, n, poly):
        self.n = n
        self.poly = poly

    @classmethod
    def const(cls, n, c):
        if isinstance(c, int):
            c = Scalar.from_int(c)
        return cls(n, SparsePoly.const(c, _DOM))

    @classmethod
    def sigma(cls, n, k):
        if not 1 <= k <= n:
            raise BadConfig(f"sigma_{k} does not live on size-{n} configurations")
        return cls(n, SparsePoly.gen(k, _DOM))

    def _check(self, other):
        if self.n != other.n:
            raise BadConfig("configuration sizes differ")

    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = ConfigPolynomial.const(self.n, other)
        self._check(other)
        return ConfigPolynomial(self.n, self.poly + other.poly)

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = ConfigPolynomial.const(self.n, other)
        self._check(other)
        return ConfigPolynomial(self.n, self.poly - other.poly)

    def __neg__(self):
        return ConfigPolynomial(self.n, -self.poly)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            other = ConfigPolynomial.const(self.n, other)
        self._check(other)
        return ConfigPolynomial(self.n, self.poly * other.poly)

    def __eq__(self, other):
        return (isinstance(other, ConfigPolynomial)
                and self.n == other.n and self.poly == other.poly)

    def __bool__(self):
        return not self.poly.is_zero

    def evaluate(self, sigmas):
        """Value at explicit coordinates sigma_1..sigma_n (Scalars)."""
        if len(sigmas) != self.n:
            raise BadConfig("wrong number of coordinates")
        out = ZERO
        for mono, c in self.poly.terms.items():
            term = c
            for k, e in mono:
                term = term * sigmas[k - 1] ** e
            out = out + term
        return out

    def evaluate_at_roots(self, roots):
        return self.evaluate(elementary_symmetric(roots))

    def __str__(self):
        from .exact_arith import format_poly
        return format_poly(self.poly, gen_str=lambda k: f"sigma{k}",
                           coeff_str=str, coeff_parens=True)

    __repr__ = __str__


def elementary_symmetric(roots):
    """[e_1, ..., e_n] of the given Scalars."""
    es = [ONE]
    for r in roots:
        es = [ONE] + [es[k] + es[k - 1] * r for k in range(1, len(es))] + [es[-1] * r]
    return es[1:]


def discriminant_value(roots):
    """prod_{i<j} (z_i - z_j) with the index order fixed."""
    out = ONE
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            out = out * (roots[i] - roots[j])
    return out


class SkewPolynomial:
    """Skew-symmetric polynomial stored as Disc times a symmetric part."""

    __slots__ = ("n", "part")

    def __init__(self, n, part):
        if part.n != n:
            raise BadConfig("symmetric part lives on the wrong size")
        self.n = n
        self.part = part

    def evaluate_at_roots(self, roots):
        return discriminant_value(roots) * self.part.evaluate_at_roots(roots)

    def skew_check(self, roots, i, j):
        """Value after swapping slots i and j equals minus the value."""
        swapped = list(roots)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        return self.evaluate_at_roots(swapped) == -self.evaluate_at_roots(roots)


def _sigma_images(n, z0):
    """sigma'_k of (z - z0) pi in terms of sigma_1..sigma_n of pi."""
    images = {}
    for k in range(1, n + 2):
        img = SparsePoly.const(ZERO, _DOM)
        if k <= n:
            img = img + SparsePoly.gen(k, _DOM)
        if k == 1:
            img = img + SparsePoly.const(z0, _DOM)
        elif k - 1 <= n:
            img = img + SparsePoly.gen(k - 1, _DOM) * SparsePoly.const(z0, _DOM)
        images[k] = img
    return images


def boson_create(z0, f):
    """Pull back along pi -> (z - z0) pi: functions on size n+1 -> size n."""
    if isinstance(z0, int):
        z0 = Scalar.from_int(z0)
    n = f.n - 1
    if n < 0:
        raise BadConfig("cannot create into functions on the empty product")
    images = _sigma_images(n, z0)
    out = SparsePoly.const(ZERO, _DOM)
    for mono, c in f.poly.terms.items():
        term = SparsePoly.const(c, _DOM)
        for k, e in mono:
            term = term * images[k] ** e
        out = out + term
    return ConfigPolynomial(n, out)


def pi_value(n, z0):
    """pi(z0) = z0^n - sigma_1 z0^(n-1) + ... +- sigma_n on size n."""
    if isinstance(z0, int):
        z0 = Scalar.from_int(z0)
    out = SparsePoly.const(z0 ** n if n else ONE, _DOM)
    sign = -1
    for k in range(1, n + 1):
        c = z0 ** (n - k) if n - k else ONE
        if sign < 0:
            c = -c
        out = out + SparsePoly.gen(k, _DOM) * SparsePoly.const(c, _DOM)
        sign = -sign
    return ConfigPolynomial(n, out)


def fermion_create(z0, f):
    """pi(z0) times the bosonic pullback: the creation of Eq-style duals."""
    if isinstance(z0, int):
        z0 = Scalar.from_int(z0)
    g = boson_create(z0, f)
    return pi_value(g.n, z0) * g


def _random_scalar(rng):
    return Scalar.from_q(QNUM(rng.randint(-40, 40), rng.randint(1, 12)))


def skew_oracle_check(z0, p, samples=20, seed=0):
    """Compare fermion_create against the root-coordinate skew transport.

    p lives on size n+1.  The skew polynomial q = Disc * p gains a
    particle by substituting z0 into its first slot; dividing the result
    by the n-variable discriminant must reproduce fermion_create(z0, p)
    at every sample configuration.
    """
    if isinstance(z0, int):
        z0 = Scalar.from_int(z0)
    n = p.n - 1
    created = fermion_create(z0, p)
    skew = SkewPolynomial(p.n, p)
    rng = random.Random(seed)
    mismatches = []
    checked = 0
    while checked < samples:
        roots = [_random_scalar(rng) for _ in range(n)]
        if len({str(r) for r in roots + [z0]}) != n + 1:
            continue
        checked += 1
        lhs = created.evaluate_at_roots(roots)
        disc = discriminant_value(roots)
        rhs = skew.evaluate_at_roots([z0] + roots) / disc
        if lhs != rhs:
            mismatches.append({"roots": [str(r) for r in roots],
                               "lhs": str(lhs), "rhs": str(rhs)})
    return {"n": n, "samples": checked, "mismatches": mismatches,
            "ok": not mismatches}


# ---------------------------------------------------------------------------
# Consistency of the localized creation field with the finite picture
# ---------------------------------------------------------------------------


def evaluate_functional(F, xi):
    """Value of a functional at an explicit divisor-form argument."""
    def eval_poly(p):
        out = ZERO
        for mono, c in p.terms.items():
            term = c
            for sym, e in mono:
                term = term * eval_deriv(xi, sym.point, sym.order) ** e
            out = out + term
        return out

    return eval_poly(F.num) / eval_poly(F.den)


def fock_consistency(z0, v, K, n=2):
    """Check the populated-ground-state transport of the creation field.

    The finite-level creation acts on functions of the absolute state
    pi = p_S pi_S by G -> pi(z0) G((z-z0) pi); rewriting it in the
    relative coordinate pi_S multiplies the size-n creation by the
    constant p_S(z0).  The geometric creation field of the operator
    catalog computes the relative action through the jet calculus; the
    ratio of the two must be exactly p_S(z0), a constant in the
    configuration (Fock) variables.
    """
    from .conformal_ops import apply, make_psi

    if isinstance(z0, int):
        z0 = Scalar.from_int(z0)
    F = unlocalize(v)
    ground = [Scalar.param(f"a{i+1}") for i in range(K)]
    roots = [Scalar.param(f"w{i+1}") for i in range(n)]
    p_S_at_z0 = ONE
    for a in ground:
        p_S_at_z0 = p_S_at_z0 * (z0 - a)

    pi_S = DivisorFunction(ONE, {w: 1 for w in roots})
    pi_abs = pi_S * DivisorFunction(ONE, {a: 1 for a in ground})

    # finite side: pi(z0) G((z - z0) pi) with G(pi) = F(pi / p_S)
    finite = (evaluate_functional(F, DivisorFunction.linear(z0) * pi_S)
              * eval_deriv(pi_abs, z0, 0))
    # geometric side: the catalog creation field evaluated at pi_S
    geom = evaluate_functional(apply(make_psi(z0), F), pi_S)

    if not geom:
        return {"ratio": None, "constant": bool(finite) is False,
                "expected": str(p_S_at_z0), "ok": not finite}
    ratio = finite / geom
    free_of_roots = all(f"w{i+1}" not in ratio.parameters() for i in range(n))
    return {
        "ratio": str(ratio),
        "constant": free_of_roots,
        "expected": str(p_S_at_z0),
        "ok": free_of_roots and ratio == p_S_at_z0,
    }

"""Semigeometric partial operators on the field of evaluation functionals.

An operator is (prefactor, twist): it sends F to prefactor * Aut(F), where
Aut is the field automorphism induced by multiplying the argument function
by the twist, acting on symbols by the Leibniz rule

    Aut(E[t;k]) = sum_{j<=k} C(k,j) twist^(k-j)(t) E[t;j].

Application is partial: the support of F must avoid the zeros and poles of
the twist, point equality decided exactly in the scalar field.
"""

import math

from ._parse import ExprParser, TokenStream
from .errors import (
    DivisionByZero, DomainViolation, ExprSyntaxError, NotExtractable, PrecisionLoss,
)
from .exact_arith import (
    ONE, ZERO, SCALAR_DOMAIN, LaurentSeries, Scalar, ScalarParser, scalar_series,
)
from .mm_field import (
    MM_DOMAIN, MM_ONE, MM_ZERO, MMElement, MMSymbol,
)
from .p1_func import DivisorFunction, _DFParser, taylor_at

DF_ONE = DivisorFunction.const(ONE)


class SemigeomOp:
    """prefactor (a functional) times the twist automorphism."""

    __slots__ = ("prefactor", "twist", "degree")

    def __init__(self, prefactor, twist, degree):
        self.prefactor = prefactor
        self.twist = twist
        self.degree = degree

    def __eq__(self, other):
        return (isinstance(other, SemigeomOp)
                and self.prefactor == other.prefactor
                and self.twist == other.twist
                and self.degree == other.degree)

    def parameters(self):
        out = set()
        out |= {p for c in self.prefactor.num.terms.values() for p in c.parameters()}
        out |= {p for c in self.prefactor.den.terms.values() for p in c.parameters()}
        for sym in self.prefactor.symbols():
            out |= sym.point.parameters()
        out |= self.twist.constant.parameters()
        for p in self.twist.factors:
            out |= p.parameters()
        return out

    def subs(self, mapping):
        return SemigeomOp(self.prefactor.subs(mapping), self.twist.subs(mapping),
                          self.degree)

    def __matmul__(self, other):
        return compose(self, other)

    def __str__(self):
        return f"[{self.prefactor}] * M[{self.twist}]"

    __repr__ = __str__


IDENTITY_OP = SemigeomOp(MM_ONE, DF_ONE, 0)
ZERO_OP = SemigeomOp(MM_ZERO, DF_ONE, 0)


class JetOp:
    """First-order jet operator: the tau-coefficient of M_(1 + tau/(z-s)).

    This is a derivation, not a ring map; only the boson destruction field
    needs it.  apply_jet returns minus the tau-coefficient.
    """

    __slots__ = ("point",)

    def __init__(self, point):
        self.point = point

    def __eq__(self, other):
        return isinstance(other, JetOp) and self.point == other.point

    def subs(self, mapping):
        return JetOp(self.point.subs(mapping))

    def __str__(self):
        return f"B-[{self.point}]"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def make_M(xi):
    return SemigeomOp(MM_ONE, xi, 0)


def make_E(z):
    return SemigeomOp(MMElement.ev(z, 0), DF_ONE, 1)


def make_Ecycle(cycle):
    """cycle: iterable of (point, multiplicity)."""
    pre = MM_ONE
    deg = 0
    for p, k in cycle:
        pre = pre * MMElement.ev(p, 0) ** k
        deg += k
    return SemigeomOp(pre, DF_ONE, deg)


def make_F(zp, zm):
    twist = DivisorFunction(ONE, [(zm, 1), (zp, -1)])  # (z - zm)/(z - zp)
    return compose(make_Ecycle([(zp, 1), (zm, -1)]), make_M(twist))


def make_G(zp, zm):
    twist = DivisorFunction(ONE, [(zp, 1), (zm, -1)])  # (z - zp)/(z - zm)
    return compose(make_Ecycle([(zp, 1), (zm, -1)]), make_M(twist))


def make_Gcal(r, s):
    g = make_G(r, s)
    c = -ONE / (r - s)
    return SemigeomOp(g.prefactor * MMElement.const(c), g.twist, g.degree)


def make_phi(z0):
    twist = DivisorFunction(ONE, [(z0, -1)])  # 1/(z - z0)
    return compose(make_E(z0), make_M(twist))


def make_psi(z0):
    twist = DivisorFunction(ONE, [(z0, 1)])  # z - z0
    return compose(make_E(z0), make_M(twist))


def make_psi_plus(z0):
    twist = DivisorFunction(ONE, [(z0, -1)])  # 1/(z - z0)
    pre = MMElement.ev(z0, 0).inverse()
    return compose(SemigeomOp(pre, DF_ONE, -1), make_M(twist))


def make_B_plus(s):
    pre = MM_ZERO - MMElement.ev(s, 1) / MMElement.ev(s, 0)
    return SemigeomOp(pre, DF_ONE, 0)


def make_B_minus(s):
    return JetOp(s)


# ---------------------------------------------------------------------------
# Application and composition
# ---------------------------------------------------------------------------


def _check_domain(twist, points):
    bad = list(twist.factors)
    for p in points:
        for q in bad:
            if p == q:
                raise DomainViolation(p)


def _twist_jets(twist, symbols):
    """Per-point Taylor data of the twist at the support of the argument."""
    need = {}
    for sym in symbols:
        cur = need.get(sym.point, -1)
        if sym.order > cur:
            need[sym.point] = sym.order
    jets = {}
    for p, N in need.items():
        jets[p] = taylor_at(twist, p, N).coeffs
    return jets


def _binomials(n):
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return row


def aut_apply(twist, F):
    """Apply the twist automorphism to a functional."""
    if twist.is_const and twist.constant == ONE:
        return F
    symbols = F.symbols()
    _check_domain(twist, {s.point for s in symbols})
    jets = _twist_jets(twist, symbols)
    fact = [1]
    sym_map = {}
    for sym in symbols:
        k = sym.order
        jet = jets[sym.point]
        while len(fact) <= k:
            fact.append(fact[-1] * len(fact))
        # twist^(m)(t) = m! * jet[m]
        binom = _binomials(k)
        img = MM_ZERO
        for j in range(k + 1):
            m = k - j
            coeff = jet[m] * (binom[j] * fact[m])
            if coeff:
                img = img + MMElement.ev(sym.point, j) * MMElement.const(coeff)
        sym_map[sym] = img
    return F.subs_symbols(sym_map)


def apply(op, F):
    """Apply a semigeometric operator; raises DomainViolation when partial."""
    if isinstance(op, JetOp):
        return apply_jet(op, F)
    if not op.prefactor:
        return MM_ZERO
    return op.prefactor * aut_apply(op.twist, F)


def compose(op1, op2):
    """Closed-form composition: op1 after op2."""
    pre = op1.prefactor * aut_apply(op1.twist, op2.prefactor)
    return SemigeomOp(pre, op1.twist * op2.twist, op1.degree + op2.degree)


def commutator_report(op1, op2, F, sign=1):
    """Compare op1 op2 F with sign * op2 op1 F.

    Returns ("equal", None), ("ratio", scalar) or ("fails", (lhs, rhs)).
    """
    lhs = apply(compose(op1, op2), F)
    rhs = apply(compose(op2, op1), F)
    if sign == -1:
        rhs = -rhs
    if lhs == rhs:
        return ("equal", None)
    if rhs:
        ratio = lhs / rhs
        if ratio.is_const:
            return ("ratio", ratio.as_scalar())
    return ("fails", (lhs, rhs))


# ---------------------------------------------------------------------------
# Laurent expansion of functionals in a parameter
# ---------------------------------------------------------------------------


def _symbol_series(sym, u, order):
    """Expand E[p(u);k] around u=0 as an MM-valued series.

    E[p0 + d(u); k] = sum_m d(u)^m / m! * E[p0; k+m].
    """
    p = sym.point
    if u not in p.parameters():
        return LaurentSeries(u, {0: MMElement.symbol(sym)}, math.inf, MM_DOMAIN)
    ps = scalar_series(p, u, order if order > 1 else 1)
    if ps.valuation() < 0:
        raise NotExtractable(f"symbol point {p} has a pole in {u}")
    p0 = ps.coeffs.get(0, ZERO)
    delta = LaurentSeries(u, {e: c for e, c in ps.coeffs.items() if e > 0},
                          ps.order, SCALAR_DOMAIN)
    out = LaurentSeries(u, {0: MMElement.ev(p0, sym.order)}, ps.order, MM_DOMAIN)
    dpow = LaurentSeries(u, {0: ONE}, math.inf, SCALAR_DOMAIN)
    fact = 1
    m = 1
    while True:
        dpow = dpow * delta
        if dpow.valuation() is math.inf or dpow.valuation() >= out.order:
            break
        fact *= m
        term = LaurentSeries(u, {e: MMElement.const(c / fact)
                                 for e, c in dpow.coeffs.items()},
                             dpow.order, MM_DOMAIN)
        sym_m = MMElement.ev(p0, sym.order + m)
        out = out + LaurentSeries(u, {e: c * sym_m for e, c in term.coeffs.items()},
                                  term.order, MM_DOMAIN)
        m += 1
    return out


def _poly_series(p, u, order):
    """Expand a symbol polynomial (coefficients and points) in u."""
    total = LaurentSeries.zero(u, math.inf, MM_DOMAIN)
    for m, c in p.terms.items():
        if u in c.parameters():
            cs = scalar_series(c, u, order)
            term = LaurentSeries(u, {e: MMElement.const(v) for e, v in cs.coeffs.items()},
                                 cs.order, MM_DOMAIN)
        else:
            term = LaurentSeries(u, {0: MMElement.const(c)}, math.inf, MM_DOMAIN)
        for sym, e in m:
            ss = _symbol_series(sym, u, order)
            for _ in range(e):
                term = term * ss
        total = total + term
    return total


def mm_laurent_series(F, u, need_upto):
    """Laurent expansion of a functional in the parameter u.

    Returns a series with MMElement coefficients whose order exceeds
    need_upto; exponents below the valuation are exact zeros.
    """
    slack = 2
    while True:
        order = need_upto + 1 + slack
        num = _poly_series(F.num, u, order)
        den = _poly_series(F.den, u, order)
        if den.is_zero and den.order is math.inf:
            raise DivisionByZero("zero denominator in expansion")
        if den.order is math.inf:
            den = den.truncate(order)
        if den.is_zero:
            # truncation fell at or below the denominator's valuation
            slack = slack * 2 + 4
            if slack > 64 + 4 * (abs(need_upto) + 4):
                raise PrecisionLoss("could not reach requested expansion order")
            continue
        if num.order is math.inf:
            num = num.truncate(order + max(0, -_val(den)))
        try:
            res = num * den.inverse()
        except DivisionByZero:
            raise
        if res.order > need_upto:
            return res
        slack = slack * 2 + 4
        if slack > 64 + 4 * (need_upto + abs(_val(den)) + 4):
            raise PrecisionLoss("could not reach requested expansion order")


def _val(series):
    v = series.valuation()
    return 0 if v is math.inf else v


def fine_residue(family, param, a, n, F, u="u"):
    """Order-n fine residue of the applied family at param = a.

    The local equation is u = param - a with transversal direction along
    the parameter; the result is the coefficient of u^(-n).
    """
    u = _fresh_param(u, family.parameters() | _mm_params(F) | a.parameters())
    fam = family.subs({param: a + Scalar.param(u)})
    result = apply(fam, F)
    series = mm_laurent_series(result, u, max(-n, 0))
    if -n >= series.order:
        raise PrecisionLoss("expansion order too small for requested residue")
    return series.coeffs.get(-n, MM_ZERO)


def _mm_params(F):
    out = set()
    for c in list(F.num.terms.values()) + list(F.den.terms.values()):
        out |= c.parameters()
    for sym in F.symbols():
        out |= sym.point.parameters()
    return out


def _fresh_param(base, used):
    if base not in used:
        return base
    k = 1
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


# ---------------------------------------------------------------------------
# Fusion and singular locus
# ---------------------------------------------------------------------------


def fusion(op1, op2, param, base, n, u="u"):
    """Order-n fusion of the composed family along param = base.

    Returns the operator whose application equals taking the u^(-n)
    coefficient of (op1 op2 F) with u = param - base.
    """
    subs_map = {param: base}
    return fusion_along(op1, op2, subs_map, n, u=u)


def fusion_along(op1, op2, subs_map, n, u="u"):
    """Fusion along several simultaneous local equations param = base + u."""
    composed = compose(op1, op2)
    used = composed.parameters()
    for b in subs_map.values():
        used |= b.parameters()
    u = _fresh_param(u, used)
    uu = Scalar.param(u)
    fam = composed.subs({p: b + uu for p, b in subs_map.items()})
    pre = fam.prefactor
    twist = fam.twist
    series = mm_laurent_series(pre, u, max(-n, 0) + 1)
    v = series.valuation()
    if v is math.inf:
        return SemigeomOp(MM_ZERO, DF_ONE, composed.degree)
    N = -v  # exact pole order of the prefactor
    if n > N:
        return SemigeomOp(MM_ZERO, DF_ONE, composed.degree)
    coeff = series.coeffs.get(-n, MM_ZERO)
    twist_u_free = all(u not in p.parameters() for p in twist.factors) \
        and u not in twist.constant.parameters()
    if twist_u_free:
        return SemigeomOp(coeff, twist, composed.degree)
    if n == N:
        twist0 = twist.subs({u: ZERO})
        return SemigeomOp(coeff, twist0, composed.degree)
    raise NotExtractable(
        f"order-{n} coefficient mixes twist derivatives (pole order {N})")


def singular_locus(op1, op2):
    """Parameter-difference factors along which the composition is singular.

    Returns scalars q - p with p a parameter of op1 and q one of op2 such
    that q - p divides a denominator of the composed prefactor.
    """
    composed = compose(op1, op2)
    params1 = sorted(op1.parameters())
    params2 = sorted(op2.parameters())
    dens = []
    for poly in (composed.prefactor.num, composed.prefactor.den):
        for c in poly.terms.values():
            if not c.den.is_const:
                dens.append(c.den)
    out = []
    seen = set()
    for p in params1:
        for q in params2:
            if p == q or (p, q) in seen:
                continue
            seen.add((p, q))
            diff = Scalar.param(q) - Scalar.param(p)
            for d in dens:
                if q in d.gens() and p in d.gens():
                    val = Scalar.from_poly(d).subs({p: Scalar.param(q)})
                    if not val:
                        out.append(diff)
                        break
    return out


# ---------------------------------------------------------------------------
# Jet application (boson destruction field)
# ---------------------------------------------------------------------------


def _derive_poly(p, dmap):
    """Apply a derivation given on symbols to a symbol polynomial."""
    out = MM_ZERO
    for m, c in p.terms.items():
        for i, (sym, e) in enumerate(m):
            rest = list(m[:i] + m[i + 1:])
            if e > 1:
                rest.append((sym, e - 1))
            term = MMElement.const(c * e)
            for s2, e2 in sorted(rest):
                term = term * MMElement.symbol(s2) ** e2
            out = out + term * dmap[sym]
    return out


def apply_jet(jet, F):
    """Apply the boson destruction jet: minus the tau-linear part."""
    s = jet.point
    symbols = F.symbols()
    for sym in symbols:
        if sym.point == s:
            raise DomainViolation(sym.point)
    dmap = {}
    for sym in symbols:
        t = sym.point
        k = sym.order
        img = MM_ZERO
        binom = _binomials(k)
        # g(z) = 1/(z - s); g^(m)(t) = (-1)^m m! / (t - s)^(m+1)
        for j in range(k + 1):
            m = k - j
            fact = 1
            for i in range(2, m + 1):
                fact *= i
            sign = -1 if m % 2 else 1
            coeff = Scalar.from_int(sign * binom[j] * fact) / (t - s) ** (m + 1)
            img = img + MMElement.ev(t, j) * MMElement.const(coeff)
        dmap[sym] = img
    dP = _derive_poly(F.num, dmap)
    dQ = _derive_poly(F.den, dmap)
    one_poly = MM_ONE.den
    P = MMElement.make(F.num, one_poly)
    Q = MMElement.make(F.den, one_poly)
    dF = (dP * Q - P * dQ) / (Q * Q)
    return -dF


# ---------------------------------------------------------------------------
# Operator text syntax
# ---------------------------------------------------------------------------


class _OpParser:
    """Parses M[...], E[a], Ecycle[(a,k),...], F[a,b], G[a,b], Gcal[r,s],
    phi[a], psi[a], psi+[a], B+[s], B-[s], joined by @."""

    def __init__(self):
        self._scalar = ScalarParser()
        self._df = _DFParser()

    def parse(self, text):
        stream = TokenStream(text)
        op = self._parse_one(stream)
        while stream.peek().kind == "@":
            stream.next()
            rhs = self._parse_one(stream)
            if isinstance(op, JetOp) or isinstance(rhs, JetOp):
                tok = stream.peek()
                raise ExprSyntaxError("jet operators cannot be composed", tok.column)
            op = compose(op, rhs)
        tok = stream.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {tok.value!r}", tok.column)
        return op

    def _parse_one(self, stream):
        tok = stream.next()
        if tok.kind != "name":
            raise ExprSyntaxError("expected an operator name", tok.column)
        name = tok.value
        if name in ("B", "psi") and stream.peek().kind in ("+", "-"):
            name += stream.next().kind
        if name == "M":
            stream.expect("[")
            xi = self._df.parse_expr(stream).to_df()
            stream.expect("]")
            return make_M(xi)
        if name == "E":
            stream.expect("[")
            z = self._scalar.parse_expr(stream)
            stream.expect("]")
            return make_E(z)
        if name == "Ecycle":
            stream.expect("[")
            cycle = []
            while True:
                stream.expect("(")
                p = self._scalar.parse_expr(stream)
                stream.expect(",")
                k = self._scalar_int(stream)
                stream.expect(")")
                cycle.append((p, k))
                if stream.peek().kind == ",":
                    stream.next()
                    continue
                break
            stream.expect("]")
            return make_Ecycle(cycle)
        if name in ("F", "G", "Gcal"):
            stream.expect("[")
            a = self._scalar.parse_expr(stream)
            stream.expect(",")
            b = self._scalar.parse_expr(stream)
            stream.expect("]")
            maker = {"F": make_F, "G": make_G, "Gcal": make_Gcal}[name]
            return maker(a, b)
        if name in ("phi", "psi", "psi+", "B+", "B-"):
            stream.expect("[")
            a = self._scalar.parse_expr(stream)
            stream.expect("]")
            maker = {"phi": make_phi, "psi": make_psi, "psi+": make_psi_plus,
                     "B+": make_B_plus, "B-": make_B_minus}[name]
            return maker(a)
        raise ExprSyntaxError(f"unknown operator {name!r}", tok.column)

    def _scalar_int(self, stream):
        sign = 1
        if stream.peek().kind == "-":
            stream.next()
            sign = -1
        tok = stream.expect("num")
        return sign * tok.value


_OP_PARSER = _OpParser()


def parse_operator(text):
    return _OP_PARSER.parse(text)

"""Sparse multivariate polynomials over an exact field.

Generators are arbitrary hashable objects with a total order (strings for
parameter names, evaluation symbols for the meromorphic-functional field).
The canonical monomial order is graded lexicographic: higher total degree
wins; at equal degree the first generator (in ascending generator order)
with differing exponent decides, larger exponent winning.
"""

from ._kernel import mono_mul, mono_div, poly_add, poly_sub, poly_neg, poly_scale, poly_mul


class Domain:
    """Coefficient field descriptor: just the two distinguished constants."""

    __slots__ = ("zero", "one")

    def __init__(self, zero, one):
        self.zero = zero
        self.one = one


def mono_degree(m):
    return sum(e for _, e in m)


def mono_gl_lt(m1, m2):
    """Graded-lex strict comparison of two monomials."""
    d1 = mono_degree(m1)
    d2 = mono_degree(m2)
    if d1 != d2:
        return d1 < d2
    i = j = 0
    while i < len(m1) and j < len(m2):
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 == g2:
            if e1 != e2:
                return e1 < e2
            i += 1
            j += 1
        elif g1 < g2:
            # m1 carries the more significant generator
            return False
        else:
            return True
    return False


class SparsePoly:
    """Immutable sparse polynomial; terms maps monomial -> nonzero coefficient."""

    __slots__ = ("terms", "domain")

    def __init__(self, terms, domain):
        self.terms = terms
        self.domain = domain

    @classmethod
    def const(cls, c, domain):
        if not c:
            return cls({}, domain)
        return cls({(): c}, domain)

    @classmethod
    def gen(cls, g, domain):
        return cls({((g, 1),): domain.one}, domain)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self):
        if not self.terms:
            return self.domain.zero
        return self.terms[()]

    def gens(self):
        out = set()
        for m in self.terms:
            for g, _ in m:
                out.add(g)
        return out

    def total_degree(self):
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def degree_in(self, g):
        d = 0
        for m in self.terms:
            for gg, e in m:
                if gg == g and e > d:
                    d = e
        return d

    def leading_monomial(self):
        it = iter(self.terms)
        best = next(it)
        for m in it:
            if mono_gl_lt(best, m):
                best = m
        return best

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        return SparsePoly(poly_add(self.terms, other.terms), self.domain)

    def __sub__(self, other):
        return SparsePoly(poly_sub(self.terms, other.terms), self.domain)

    def __neg__(self):
        return SparsePoly(poly_neg(self.terms), self.domain)

    def __mul__(self, other):
        if isinstance(other, SparsePoly):
            return SparsePoly(poly_mul(self.terms, other.terms), self.domain)
        return SparsePoly(poly_scale(self.terms, other), self.domain)

    def scale(self, c):
        return SparsePoly(poly_scale(self.terms, c), self.domain)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.const(self.domain.one, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_mono(self, mono, coeff):
        out = {}
        for m, c in self.terms.items():
            p = c * coeff
            if p:
                out[mono_mul(m, mono)] = p
        return SparsePoly(out, self.domain)

    def monic(self):
        """Divide by the leading coefficient; zero stays zero."""
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == self.domain.one:
            return self
        inv = self.domain.one / lc
        return self.scale(inv)

    def subs_gen(self, g, value_poly):
        """Substitute a polynomial for one generator."""
        out = SparsePoly({}, self.domain)
        powers = {0: SparsePoly.const(self.domain.one, self.domain)}

        def pw(k):
            if k not in powers:
                powers[k] = pw(k - 1) * value_poly
            return powers[k]

        for m, c in self.terms.items():
            e = 0
            rest = []
            for gg, ee in m:
                if gg == g:
                    e = ee
                else:
                    rest.append((gg, ee))
            term = SparsePoly({tuple(rest): c}, self.domain)
            if e:
                term = term * pw(e)
            out = out + term
        return out

    def map_coeffs(self, fn):
        out = {}
        for m, c in self.terms.items():
            v = fn(c)
            if v:
                out[m] = v
        return out


def divexact(f, g):
    """Exact polynomial division f / g; raises if it does not divide."""
    dom = f.domain
    if g.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if g.is_const:
        inv = dom.one / g.const_value()
        return f.scale(inv)
    lm_g = g.leading_monomial()
    lc_g = g.terms[lm_g]
    rem = dict(f.terms)
    quo = {}
    while rem:
        r = SparsePoly(rem, dom)
        lm_r = r.leading_monomial()
        q_mono = mono_div(lm_r, lm_g)
        if q_mono is None:
            raise ValueError("inexact polynomial division")
        q_coeff = rem[lm_r] / lc_g
        quo[q_mono] = q_coeff
        rem = poly_sub(rem, g.mul_mono(q_mono, q_coeff).terms)
    return SparsePoly(quo, dom)


def _mono_content(p):
    """Largest monomial dividing every term of p."""
    it = iter(p.terms)
    common = dict(next(it))
    for m in it:
        md = dict(m)
        for g in list(common):
            e = md.get(g, 0)
            if e < common[g]:
                if e == 0:
                    del common[g]
                else:
                    common[g] = e
        if not common:
            break
    return tuple(sorted(common.items()))


def _mono_gcd(m1, m2):
    d2 = dict(m2)
    out = []
    for g, e in m1:
        e2 = d2.get(g, 0)
        if e2:
            out.append((g, min(e, e2)))
    return tuple(out)


def _to_univar(p, x):
    """View p as a polynomial in x with SparsePoly coefficients."""
    dom = p.domain
    coeffs = {}
    for m, c in p.terms.items():
        e = 0
        rest = []
        for g, ee in m:
            if g == x:
                e = ee
            else:
                rest.append((g, ee))
        cur = coeffs.get(e)
        add = {tuple(rest): c}
        coeffs[e] = poly_add(cur, add) if cur is not None else add
    return {e: SparsePoly(t, dom) for e, t in coeffs.items() if t}


def _from_univar(coeffs, x, dom):
    terms = {}
    for e, cp in coeffs.items():
        for m, c in cp.terms.items():
            mono = mono_mul(m, ((x, e),)) if e else m
            terms[mono] = c
    return SparsePoly(terms, dom)


def _uni_deg(u):
    return max(u) if u else -1


def _uni_sub(a, b):
    out = dict(a)
    for e, c in b.items():
        cur = out.get(e)
        s = cur - c if cur is not None else -c
        if s:
            out[e] = s
        elif cur is not None:
            del out[e]
    return out


def _uni_scale(a, cp):
    out = {}
    for e, c in a.items():
        p = c * cp
        if p:
            out[e] = p
    return out


def _uni_prem(a, b):
    """Pseudo-remainder of univariate-view polynomials (coefficients are polys)."""
    db = _uni_deg(b)
    lb = b[db]
    r = a
    while r and _uni_deg(r) >= db:
        dr = _uni_deg(r)
        lr = r[dr]
        shifted = {e + dr - db: c * lr for e, c in b.items()}
        r = _uni_sub(_uni_scale(r, lb), shifted)
    return r


def poly_gcd(f, g):
    """GCD of polynomials over a field, normalized monic (graded-lex)."""
    dom = f.domain
    one = SparsePoly.const(dom.one, dom)
    if f.is_zero:
        return g.monic() if not g.is_zero else f
    if g.is_zero:
        return f.monic()
    if f.is_const or g.is_const:
        return one
    mf = _mono_content(f)
    mg = _mono_content(g)
    m0 = _mono_gcd(mf, mg)
    if mf:
        f = SparsePoly({mono_div(m, mf): c for m, c in f.terms.items()}, dom)
    if mg:
        g = SparsePoly({mono_div(m, mg): c for m, c in g.terms.items()}, dom)
    if f.is_const or g.is_const:
        h = one
    else:
        gens = sorted(f.gens() | g.gens())
        x = gens[0]
        if len(gens) == 1:
            h = _uni_field_gcd(f, g, x)
        else:
            h = _multi_gcd(f, g, x)
    if m0:
        h = h.mul_mono(m0, dom.one)
    return h.monic()


def _uni_field_gcd(f, g, x):
    """Monic Euclid for true univariate polynomials over the field."""
    dom = f.domain
    a = {e: c for (e, c) in ((m[0][1] if m else 0, c) for m, c in f.terms.items())}
    b = {e: c for (e, c) in ((m[0][1] if m else 0, c) for m, c in g.terms.items())}
    while b:
        db = _uni_deg(b)
        lb = b[db]
        inv = dom.one / lb
        b = {e: c * inv for e, c in b.items()}
        r = a
        while r and _uni_deg(r) >= db:
            dr = _uni_deg(r)
            lr = r[dr]
            shifted = {e + dr - db: c * lr for e, c in b.items()}
            r = _uni_sub(r, shifted)
        a, b = b, r
    terms = {((x, e),) if e else (): c for e, c in a.items()}
    return SparsePoly(terms, dom).monic()


def _uni_content_pp(u, dom):
    """Content (gcd of coefficients) and primitive part of a univariate view."""
    content = SparsePoly({}, dom)
    for c in u.values():
        content = poly_gcd(content, c)
        if content.is_const and not content.is_zero:
            break
    if content.is_const:
        return SparsePoly.const(dom.one, dom), u
    pp = {e: divexact(c, content) for e, c in u.items()}
    return content, pp


def _multi_gcd(f, g, x):
    dom = f.domain
    uf = _to_univar(f, x)
    ug = _to_univar(g, x)
    cf, pf = _uni_content_pp(uf, dom)
    cg, pg = _uni_content_pp(ug, dom)
    cont = poly_gcd(cf, cg)
    a, b = pf, pg
    if _uni_deg(a) < _uni_deg(b):
        a, b = b, a
    while b:
        r = _uni_prem(a, b)
        a = b
        if r:
            _, r = _uni_content_pp(r, dom)
        b = r
    if _uni_deg(a) == 0:
        h = SparsePoly.const(dom.one, dom)
    else:
        h = _from_univar(a, x, dom)
    return cont * h

"""Exact arithmetic: the scalar field Q(p1,...,pm), truncated Laurent
series over any exact field, and flag-ordered iterated expansion.

Scalars are reduced fractions of sparse polynomials in named parameters,
with the denominator monic under the graded-lex order, so equality is
canonical.  Series record the first unknown exponent (`order`); every
stored exponent is exact and everything below the valuation is exactly 0.
"""

import math

try:
    from gmpy2 import mpq as QNUM
except ImportError:  # pragma: no cover
    from fractions import Fraction as QNUM

from ._poly import Domain, SparsePoly, divexact, poly_gcd
from ._parse import ExprParser
from .errors import DivisionByZero, PrecisionLoss, ExprSyntaxError

QQ = Domain(QNUM(0), QNUM(1))
_QTYPE = type(QNUM(1))

_INF = math.inf


def _q_str(c):
    return str(c)


def format_poly(p, gen_str=str, coeff_str=None, coeff_parens=False):
    """Canonical text for a sparse polynomial, terms in descending order."""
    if not p.terms:
        return "0"
    monos = sorted(p.terms, key=_mono_sort_key(), reverse=True)
    parts = []
    for m in monos:
        c = p.terms[m]
        body = "*".join(
            f"{gen_str(g)}^{e}" if e != 1 else gen_str(g) for g, e in m
        )
        cs = (coeff_str or _q_str)(c)
        if coeff_parens and not _is_plain_number(cs):
            cs = f"({cs})"
        if not body:
            parts.append(cs)
        elif cs == "1":
            parts.append(body)
        elif cs == "-1":
            parts.append(f"-{body}")
        else:
            parts.append(f"{cs}*{body}")
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


def _is_plain_number(s):
    return all(ch.isdigit() or ch == "/" for ch in s.lstrip("-")) and s != ""


def _mono_sort_key():
    import functools

    from ._poly import mono_gl_lt

    def cmp(a, b):
        if a == b:
            return 0
        return -1 if mono_gl_lt(a, b) else 1

    return functools.cmp_to_key(cmp)


class Scalar:
    """Element of the rational-function field in named parameters."""

    __slots__ = ("num", "den", "_const", "_hash", "_str")

    def __init__(self, num, den, _const="?"):
        # Callers must pass a normalized pair; use the constructors below.
        self.num = num
        self.den = den
        if _const == "?":
            _const = num.const_value() if (num.is_const and den.is_const) else None
        self._const = _const
        self._hash = None
        self._str = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_q(cls, q):
        q = QNUM(q)
        return cls(SparsePoly.const(q, QQ), _ONE_POLY, q)

    @classmethod
    def from_int(cls, n):
        return cls.from_q(QNUM(n))

    @classmethod
    def param(cls, name):
        return cls(SparsePoly.gen(name, QQ), _ONE_POLY, None)

    @classmethod
    def from_poly(cls, p):
        return cls(p, _ONE_POLY)

    @classmethod
    def make(cls, num, den):
        """Normalize an arbitrary polynomial fraction."""
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if num.is_zero:
            return ZERO
        if den.is_const:
            c = den.const_value()
            if c != QQ.one:
                num = num.scale(QQ.one / c)
            return cls(num, _ONE_POLY)
        g = poly_gcd(num, den)
        if not g.is_const:
            num = divexact(num, g)
            den = divexact(den, g)
        if den.is_const:
            c = den.const_value()
            if c != QQ.one:
                num = num.scale(QQ.one / c)
            return cls(num, _ONE_POLY)
        lc = den.leading_coeff()
        if lc != QQ.one:
            inv = QQ.one / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    # -- predicates --------------------------------------------------------

    @property
    def is_const(self):
        return self._const is not None

    def as_q(self):
        if self._const is None:
            raise ValueError("scalar is not a rational constant")
        return self._const

    def parameters(self):
        return self.num.gens() | self.den.gens()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, _QTYPE)):
            other = Scalar.from_q(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self._const is not None or other._const is not None:
            return self._const == other._const
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self._const is not None:
                self._hash = hash(self._const)
            else:
                self._hash = hash((frozenset(self.num.terms.items()),
                                   frozenset(self.den.terms.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar.from_int(x)
        try:
            return Scalar.from_q(x)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        if self._const is not None and other._const is not None:
            return Scalar.from_q(self._const + other._const)
        d1, d2 = self.den, other.den
        if d1.is_const and d2.is_const:
            return Scalar(self.num + other.num, _ONE_POLY)
        if d1 == d2:
            return Scalar.make(self.num + other.num, d1)
        g = poly_gcd(d1, d2)
        if g.is_const:
            num = self.num * d2 + other.num * d1
            if num.is_zero:
                return ZERO
            return Scalar(num, d1 * d2)
        d2r = divexact(d2, g)
        num = self.num * d2r + other.num * divexact(d1, g)
        if num.is_zero:
            return ZERO
        den = d1 * d2r
        g2 = poly_gcd(num, g)
        if not g2.is_const:
            num = divexact(num, g2)
            den = divexact(den, g2)
        return Scalar(num, den)

    __radd__ = __add__

    def __neg__(self):
        if self._const is not None:
            return Scalar.from_q(-self._const)
        return Scalar(-self.num, self.den)

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        if self._const is not None and other._const is not None:
            return Scalar.from_q(self._const * other._const)
        if not self.num or not other.num:
            return ZERO
        if self._const is not None:
            return Scalar(other.num.scale(self._const), other.den)
        if other._const is not None:
            return Scalar(self.num.scale(other._const), self.den)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_const:
            g = poly_gcd(n1, d2)
            if not g.is_const:
                n1 = divexact(n1, g)
                d2 = divexact(d2, g)
        if not d1.is_const:
            g = poly_gcd(n2, d1)
            if not g.is_const:
                n2 = divexact(n2, g)
                d1 = divexact(d1, g)
        num = n1 * n2
        den = d1 * d2
        if den.is_const:
            c = den.const_value()
            if c != QQ.one:
                num = num.scale(QQ.one / c)
            return Scalar(num, _ONE_POLY)
        lc = den.leading_coeff()
        if lc != QQ.one:
            inv = QQ.one / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return Scalar(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero scalar")
        if self._const is not None:
            return Scalar.from_q(QQ.one / self._const)
        num, den = self.den, self.num
        lc = den.leading_coeff()
        if den.is_const:
            c = den.const_value()
            if c != QQ.one:
                num = num.scale(QQ.one / c)
            return Scalar(num, _ONE_POLY)
        if lc != QQ.one:
            inv = QQ.one / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return Scalar(num, den)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n == 0:
            return ONE
        base = self if n > 0 else self.inverse()
        n = abs(n)
        out = ONE
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- substitution ------------------------------------------------------

    def subs(self, mapping):
        """Substitute Scalars for parameters; mapping: name -> Scalar."""
        if not any(name in mapping for name in self.parameters()):
            return self
        num = _eval_poly(self.num, mapping)
        den = _eval_poly(self.den, mapping)
        return num / den

    # -- formatting --------------------------------------------------------

    def __str__(self):
        if self._str is None:
            if self.den.is_const:
                self._str = format_poly(self.num)
            else:
                ns = format_poly(self.num)
                ds = format_poly(self.den)
                if len(self.num.terms) > 1 or "*" in ns or "^" in ns or "/" in ns:
                    ns = f"({ns})"
                if len(self.den.terms) > 1 or "*" in ds or "^" in ds or "/" in ds:
                    ds = f"({ds})"
                self._str = f"{ns}/{ds}"
        return self._str

    __repr__ = __str__

    def sort_key(self):
        return str(self)


_ONE_POLY = SparsePoly.const(QQ.one, QQ)
ZERO = Scalar(SparsePoly({}, QQ), _ONE_POLY, QQ.zero)
ONE = Scalar(_ONE_POLY, _ONE_POLY, QQ.one)

SCALAR_DOMAIN = Domain(ZERO, ONE)


def _eval_poly(p, mapping):
    """Evaluate a polynomial with parameters substituted by Scalars."""
    cache = {}

    def value_of(g):
        if g not in cache:
            v = mapping.get(g)
            cache[g] = v if v is not None else Scalar.param(g)
        return cache[g]

    total = ZERO
    for m, c in p.terms.items():
        term = Scalar.from_q(c)
        for g, e in m:
            term = term * value_of(g) ** e
        total = total + term
    return total


class ScalarParser(ExprParser):
    def from_int(self, n):
        return Scalar.from_int(n)

    def parse_atom(self, stream, token):
        name = token.value
        if not (name[0].islower()):
            raise ExprSyntaxError(f"invalid parameter name {name!r}", token.column)
        return Scalar.param(name)


_SCALAR_PARSER = ScalarParser()


def parse_scalar(text):
    return _SCALAR_PARSER.parse(text)


def scalar_arith(a, b, op):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if not b:
            raise DivisionByZero("scalar division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Truncated Laurent series over an arbitrary exact field
# ---------------------------------------------------------------------------


class LaurentSeries:
    """Finite Laurent data plus a truncation order.

    coeffs maps exponent -> nonzero coefficient, all exponents < order;
    exponents < order absent from coeffs are exactly zero.
    """

    __slots__ = ("var", "coeffs", "order", "domain")

    def __init__(self, var, coeffs, order, domain):
        self.var = var
        self.coeffs = {e: c for e, c in coeffs.items() if c and e < order}
        self.order = order
        self.domain = domain

    @classmethod
    def zero(cls, var, order, domain):
        return cls(var, {}, order, domain)

    @classmethod
    def const(cls, var, c, order, domain):
        return cls(var, {0: c}, order, domain)

    @classmethod
    def gen(cls, var, order, domain):
        return cls(var, {1: domain.one}, order, domain)

    def valuation(self):
        if not self.coeffs:
            return _INF
        return min(self.coeffs)

    @property
    def is_zero(self):
        return not self.coeffs

    def coefficient(self, n):
        if n >= self.order:
            raise PrecisionLoss(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs.get(n, self.domain.zero)

    def truncate(self, order):
        if order >= self.order:
            return self
        return LaurentSeries(self.var, self.coeffs, order, self.domain)

    def shift(self, k):
        return LaurentSeries(self.var, {e + k: c for e, c in self.coeffs.items()},
                             self.order + k, self.domain)

    def __eq__(self, other):
        return (isinstance(other, LaurentSeries) and self.var == other.var
                and self.order == other.order and self.coeffs == other.coeffs)

    def __add__(self, other):
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            cur = out.get(e)
            s = cur + c if cur is not None else c
            if s:
                out[e] = s
            elif cur is not None:
                del out[e]
        return LaurentSeries(self.var, out, order, self.domain)

    def __neg__(self):
        return LaurentSeries(self.var, {e: -c for e, c in self.coeffs.items()},
                             self.order, self.domain)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return LaurentSeries(self.var, {}, self.order, self.domain)
        return LaurentSeries(self.var, {e: v * c for e, v in self.coeffs.items()},
                             self.order, self.domain)

    def __mul__(self, other):
        v1 = self.valuation()
        v2 = other.valuation()
        # the unknown tail of one factor first pollutes order + valuation(other)
        order = min(self.order + v2, other.order + v1)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= order:
                    continue
                p = c1 * c2
                if not p:
                    continue
                cur = out.get(e)
                s = cur + p if cur is not None else p
                if s:
                    out[e] = s
                elif cur is not None:
                    del out[e]
        return LaurentSeries(self.var, out, order, self.domain)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.const(self.var, self.domain.one, _INF, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        """Multiplicative inverse; the leading coefficient must be nonzero."""
        v = self.valuation()
        if v is _INF:
            raise DivisionByZero("inverse of zero series")
        if self.order is _INF:
            raise ValueError("inverse of an untruncated series; truncate first")
        # reduce to a power series with unit constant term
        n_terms = self.order - v
        lead = self.coeffs[v]
        inv_lead = self.domain.one / lead
        a = {e - v: c * inv_lead for e, c in self.coeffs.items()}
        # b = 1 / (1 + t) with t = a - 1, computed by recursion
        b = {0: self.domain.one}
        for k in range(1, n_terms):
            acc = self.domain.zero
            for j in range(0, k):
                ak = a.get(k - j)
                bj = b.get(j)
                if ak is not None and bj is not None:
                    acc = acc - ak * bj
            if acc:
                b[k] = acc
        out = {e - v: c * inv_lead for e, c in b.items()}
        return LaurentSeries(self.var, out, self.order - 2 * v, self.domain)

    def __truediv__(self, other):
        return self * other.inverse()

    def map_coeffs(self, fn):
        return LaurentSeries(self.var, {e: fn(c) for e, c in self.coeffs.items()},
                             self.order, self.domain)

    def __str__(self):
        if not self.coeffs:
            return f"O({self.var}^{self.order})"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{self.var}^{e}")
        return " + ".join(parts) + f" + O({self.var}^{self.order})"

    __repr__ = __str__


def _val_or(s, default):
    v = s.valuation()
    return default if v is _INF else v


def series_exp(f):
    """exp of a series with valuation >= 1."""
    if _val_or(f, 1) < 1:
        raise ValueError("series exp needs valuation >= 1")
    if f.order is _INF:
        raise ValueError("exp of an untruncated series; truncate first")
    order = f.order
    result = LaurentSeries.const(f.var, f.domain.one, order, f.domain)
    term = LaurentSeries.const(f.var, f.domain.one, order, f.domain)
    k = 1
    while k < order:
        term = (term * f).scale(f.domain.one / k)
        if term.is_zero:
            break
        result = result + term
        k += 1
    return result


def series_log(f):
    """log of a series with constant term 1."""
    if f.coeffs.get(0) != f.domain.one or _val_or(f, 0) < 0:
        raise ValueError("series log needs constant term 1")
    if f.order is _INF:
        raise ValueError("log of an untruncated series; truncate first")
    g = f - LaurentSeries.const(f.var, f.domain.one, f.order, f.domain)
    order = f.order
    result = LaurentSeries.zero(f.var, order, f.domain)
    term = LaurentSeries.const(f.var, f.domain.one, order, f.domain)
    k = 1
    while k < order:
        term = term * g
        if term.is_zero:
            break
        kq = f.domain.one / k
        result = result + term.scale(kq if k % 2 == 1 else -kq)
        k += 1
    return result


def series_compose(f, g):
    """Substitute g (valuation >= 1) into f."""
    vg = _val_or(g, 1)
    if vg is not _INF and vg < 1:
        raise ValueError("series composition needs inner valuation >= 1")
    if f.order is _INF or vg is _INF:
        order0 = _INF if f.order is _INF or f.order > 0 else f.order
    else:
        order0 = f.order * vg
    result = LaurentSeries.zero(g.var, order0, f.domain)
    for e in sorted(f.coeffs):
        result = result + (g ** e).scale(f.coeffs[e])
    return result


def series_transcendental(series, op, other=None):
    if op in ("exp", "log") and series.order is not _INF and series.order <= 0:
        raise PrecisionLoss("empty series window")
    if op == "exp":
        return series_exp(series)
    if op == "log":
        return series_log(series)
    if op == "compose":
        if other is None:
            raise ValueError("compose needs a second series")
        return series_compose(series, other)
    raise ValueError(f"unknown series operation {op!r}")


# ---------------------------------------------------------------------------
# Laurent expansion of scalars
# ---------------------------------------------------------------------------


def _scalar_univar(p, u):
    """View a QQ-polynomial as {exp in u: Scalar in the other parameters}."""
    from ._poly import _to_univar

    return {e: Scalar.from_poly(cp) for e, cp in _to_univar(p, u).items()}


def laurent_expand(f, u, window):
    """Expand a Scalar in the parameter u over the window [L, U].

    The coefficient of u^(-n) is the order-n residue at u = 0.
    """
    lo, hi = window
    if hi < lo:
        raise PrecisionLoss("empty expansion window")
    series = scalar_series(f, u, hi + 1)
    # materialize the window: exponents below the valuation are exact zeros
    return series


def scalar_series(f, u, order):
    """Laurent series of a Scalar in parameter u, truncated at `order`."""
    num_u = _scalar_univar(f.num, u)
    if not num_u:
        return LaurentSeries.zero(u, order, SCALAR_DOMAIN)
    den_u = _scalar_univar(f.den, u)
    vn = min(num_u)
    vd = min(den_u)
    shift = vn - vd
    work = order - shift
    if work <= 0:
        return LaurentSeries.zero(u, order, SCALAR_DOMAIN)
    P = LaurentSeries(u, {e - vn: c for e, c in num_u.items()}, work, SCALAR_DOMAIN)
    Q = LaurentSeries(u, {e - vd: c for e, c in den_u.items()}, work, SCALAR_DOMAIN)
    return (P * Q.inverse()).truncate(work).shift(shift)


class IteratedSeries:
    """Flag-ordered double expansion: inner variable first."""

    __slots__ = ("inner", "outer", "rows", "order")

    def __init__(self, inner, outer, rows, order):
        self.inner = inner
        self.outer = outer
        self.rows = rows  # inner exponent -> LaurentSeries in outer
        self.order = order

    def coefficient(self, inner_exp, outer_exp):
        if inner_exp >= self.order:
            raise PrecisionLoss(f"inner exponent {inner_exp} beyond order {self.order}")
        row = self.rows.get(inner_exp)
        if row is None:
            return ZERO
        return row.coefficient(outer_exp)

    def inner_exponents(self):
        return sorted(self.rows)


def iterated_laurent(f, flag_order, window):
    """Iterated expansion of a Scalar in two parameters, inner first."""
    inner, outer = flag_order
    lo, hi = window
    if hi < lo:
        raise PrecisionLoss("empty expansion window")
    first = scalar_series(f, inner, hi + 1)
    rows = {}
    for e, c in first.coeffs.items():
        row = scalar_series(c, outer, hi + 1)
        if row.coeffs:
            rows[e] = row
    return IteratedSeries(inner, outer, rows, hi + 1)

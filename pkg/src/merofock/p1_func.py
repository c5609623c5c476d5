"""Rational functions on the projective line in divisor form.

A DivisorFunction is a nonzero constant times a product of linear factors
(z - a)^m with pairwise distinct points a and nonzero integer
multiplicities.  Points live in the scalar field; the point at infinity is
never used.  Evaluation, differentiation and Taylor jets are exact, and
jets convert to and from the multiplicative coordinates (T, t_k) with
xi(z) = T exp(sum t_k z^k).
"""

from .exact_arith import (
    ONE, ZERO, QQ, QNUM, SCALAR_DOMAIN, LaurentSeries, Scalar,
    parse_scalar, series_exp, series_log,
)
from ._parse import ExprParser
from .errors import DivisionByZero, ExprSyntaxError, PoleAtPoint, ZeroConstantTerm


def _binom_coeffs(m, c, N):
    """Taylor coefficients of (u + c)^m at u = 0 up to order N, c nonzero.

    Valid for negative m (generalized binomial).
    """
    out = []
    cur = c ** m
    coef = ONE
    for j in range(N + 1):
        out.append(coef * cur)
        # next: C(m, j+1) c^(m-j-1); update incrementally
        coef = coef * Scalar.from_q(QNUM(m - j, j + 1))
        cur = cur / c
    return out


class DivisorFunction:
    """constant * product over (point, multiplicity); immutable."""

    __slots__ = ("constant", "factors")

    def __init__(self, constant, factors):
        if not constant:
            raise DivisionByZero("divisor function with zero constant")
        merged = {}
        for p, m in (factors.items() if isinstance(factors, dict) else factors):
            if m == 0:
                continue
            cur = merged.get(p, 0) + m
            if cur:
                merged[p] = cur
            elif p in merged:
                del merged[p]
        self.constant = constant
        self.factors = merged

    @classmethod
    def const(cls, c):
        return cls(c, {})

    @classmethod
    def linear(cls, point):
        """The function z - point."""
        return cls(ONE, {point: 1})

    @property
    def is_const(self):
        return not self.factors

    def zeros(self):
        return [p for p, m in self.factors.items() if m > 0]

    def poles(self):
        return [p for p, m in self.factors.items() if m < 0]

    def degree(self):
        """Sum of multiplicities (order at infinity is its negative)."""
        return sum(self.factors.values())

    def __eq__(self, other):
        return (isinstance(other, DivisorFunction)
                and self.constant == other.constant and self.factors == other.factors)

    def __hash__(self):
        return hash((self.constant, frozenset(self.factors.items())))

    def __mul__(self, other):
        if isinstance(other, DivisorFunction):
            merged = dict(self.factors)
            for p, m in other.factors.items():
                cur = merged.get(p, 0) + m
                if cur:
                    merged[p] = cur
                elif p in merged:
                    del merged[p]
            return DivisorFunction(self.constant * other.constant, merged)
        return DivisorFunction(self.constant * other, self.factors)

    def inv(self):
        return DivisorFunction(ONE / self.constant,
                               {p: -m for p, m in self.factors.items()})

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n):
        if n == 0:
            return DivisorFunction(ONE, {})
        return DivisorFunction(self.constant ** n,
                               {p: m * n for p, m in self.factors.items()})

    def subs(self, mapping):
        """Substitute scalars for parameters in the constant and the points."""
        return DivisorFunction(self.constant.subs(mapping),
                               [(p.subs(mapping), m) for p, m in self.factors.items()])

    def __str__(self):
        parts = []
        if self.constant != ONE or not self.factors:
            cs = str(self.constant)
            if "+" in cs or (" - " in cs) or "/" in cs or "*" in cs:
                cs = f"({cs})"
            parts.append(cs)
        for p in sorted(self.factors, key=lambda q: q.sort_key()):
            m = self.factors[p]
            ps = str(p)
            if not _is_atomic(ps):
                ps = f"({ps})"
            base = f"(z - {ps})"
            parts.append(base if m == 1 else f"{base}^{m}")
        return "*".join(parts)

    __repr__ = __str__


def _is_atomic(s):
    return not any(ch in s for ch in "+-*/^ ")


class PointJet:
    """Truncated Taylor data of a function at a base point."""

    __slots__ = ("point", "coeffs")

    def __init__(self, point, coeffs):
        self.point = point
        self.coeffs = list(coeffs)

    def __eq__(self, other):
        return (isinstance(other, PointJet) and self.point == other.point
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"PointJet({self.point}, {self.coeffs})"


def df_mul(a, b):
    return a * b


def df_inv(a):
    return a.inv()


def taylor_at(xi, p, N):
    """Order-N jet of a DivisorFunction at p; p must not be a pole."""
    jet = [xi.constant] + [ZERO] * N
    length = 1
    for a, m in xi.factors.items():
        if p == a:
            if m < 0:
                raise PoleAtPoint(p)
            fac = [ZERO] * min(m, N + 1) + [ONE] if m <= N else [ZERO] * (N + 1)
            fac = fac[: N + 1]
            if len(fac) < N + 1:
                fac += [ZERO] * (N + 1 - len(fac))
        else:
            fac = _binom_coeffs(m, p - a, N)
        # truncated Cauchy product
        new = [ZERO] * (N + 1)
        for i in range(min(length, N + 1)):
            ci = jet[i]
            if not ci:
                continue
            for j in range(N + 1 - i):
                cj = fac[j]
                if cj:
                    new[i + j] = new[i + j] + ci * cj
        jet = new
        length = N + 1
    return PointJet(p, jet)


def eval_deriv(xi, t, k):
    """k-th derivative of xi at t, exact."""
    jet = taylor_at(xi, t, k)
    out = jet.coeffs[k]
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return out * fact


def log_coords(jet):
    """(T, [t_1..t_N]) with jet = T exp(sum t_k z^k) + O(z^(N+1))."""
    a0 = jet.coeffs[0]
    if not a0:
        raise ZeroConstantTerm("jet has zero constant term")
    N = len(jet.coeffs) - 1
    series = LaurentSeries("z", {k: c / a0 for k, c in enumerate(jet.coeffs)},
                           N + 1, SCALAR_DOMAIN)
    lg = series_log(series)
    return a0, [lg.coeffs.get(k, ZERO) for k in range(1, N + 1)]


def exp_coords(T, t, point=ZERO):
    """Inverse of log_coords: rebuild the jet from (T, t_1..t_N)."""
    N = len(t)
    series = LaurentSeries("z", {k + 1: c for k, c in enumerate(t)},
                           N + 1, SCALAR_DOMAIN)
    ex = series_exp(series)
    return PointJet(point, [T * ex.coeffs.get(k, ZERO) for k in range(N + 1)])


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _DFVal:
    """Parse-time value: either linear in z (a*z + b) or a general divisor
    function.  Addition is only allowed while still linear."""

    __slots__ = ("lin", "df")

    def __init__(self, lin=None, df=None):
        self.lin = lin  # (a, b) scalars for a*z + b
        self.df = df

    @classmethod
    def scalar(cls, s):
        return cls(lin=(ZERO, s))

    @classmethod
    def z(cls):
        return cls(lin=(ONE, ZERO))

    def to_df(self):
        if self.df is not None:
            return self.df
        a, b = self.lin
        if not a:
            return DivisorFunction.const(b)
        return DivisorFunction(a, {-b / a: 1})

    def _lin_only(self, other, what):
        if self.lin is None or other.lin is None:
            raise ValueError(f"{what} of nonlinear factors is not a divisor function")
        return other

    def __add__(self, other):
        self._lin_only(other, "sum")
        return _DFVal(lin=(self.lin[0] + other.lin[0], self.lin[1] + other.lin[1]))

    def __sub__(self, other):
        self._lin_only(other, "difference")
        return _DFVal(lin=(self.lin[0] - other.lin[0], self.lin[1] - other.lin[1]))

    def __neg__(self):
        if self.lin is not None:
            return _DFVal(lin=(-self.lin[0], -self.lin[1]))
        return _DFVal(df=self.df * DivisorFunction.const(-ONE))

    def __mul__(self, other):
        if self.lin is not None and other.lin is not None:
            a1, b1 = self.lin
            a2, b2 = other.lin
            if not a1:
                return _DFVal(lin=(b1 * a2, b1 * b2))
            if not a2:
                return _DFVal(lin=(a1 * b2, b1 * b2))
        return _DFVal(df=self.to_df() * other.to_df())

    def __truediv__(self, other):
        if (self.lin is not None and other.lin is not None
                and not self.lin[0] and not other.lin[0]):
            # scalar / scalar stays a scalar, so z - 1/2 keeps a linear form
            return _DFVal(lin=(ZERO, self.lin[1] / other.lin[1]))
        return _DFVal(df=self.to_df() / other.to_df())

    def __pow__(self, n):
        if self.lin is not None and not self.lin[0]:
            return _DFVal(lin=(ZERO, self.lin[1] ** n))
        return _DFVal(df=self.to_df() ** n)


class _DFParser(ExprParser):
    def from_int(self, n):
        return _DFVal.scalar(Scalar.from_int(n))

    def parse_atom(self, stream, token):
        name = token.value
        if name == "z":
            return _DFVal.z()
        if not name[0].islower():
            raise ExprSyntaxError(f"invalid name {name!r}", token.column)
        return _DFVal.scalar(Scalar.param(name))


_DF_PARSER = _DFParser()


def parse_divisor(text):
    val = _DF_PARSER.parse(text)
    return val.to_df()

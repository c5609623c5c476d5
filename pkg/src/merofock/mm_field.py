"""The field of rational expressions in evaluation symbols E[a;k].

A symbol E[a;k] is the functional xi -> xi^(k)(a).  Elements are reduced
fractions of sparse polynomials in symbols with scalar coefficients; the
denominator has leading coefficient one under the graded-lex order on
symbols (ordered by point normal form, then derivative order), so equality
is canonical.  Two symbols unify only when their points are equal as
scalars; distinct parameters stay distinct (generic-position semantics).
"""

from ._parse import ExprParser
from ._poly import Domain, SparsePoly, divexact, poly_gcd
from .errors import DivisionByZero, ExprSyntaxError
from .exact_arith import ONE, ZERO, Scalar, ScalarParser, format_poly

MM_COEFF_DOMAIN = Domain(ZERO, ONE)


class MMSymbol:
    """Evaluation symbol: point (a Scalar) and derivative order k >= 0."""

    __slots__ = ("point", "order", "_key")

    def __init__(self, point, order):
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        self.point = point
        self.order = order
        self._key = (point.sort_key(), order)

    def __eq__(self, other):
        return isinstance(other, MMSymbol) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return hash(self._key)

    def __str__(self):
        return f"E[{self.point};{self.order}]"

    __repr__ = __str__


def _sym_str(sym):
    return str(sym)


class MMElement:
    """Reduced fraction of symbol polynomials with scalar coefficients."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den):
        # Callers must pass a normalized pair; use the constructors below.
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, s):
        if isinstance(s, int):
            s = Scalar.from_int(s)
        return cls(SparsePoly.const(s, MM_COEFF_DOMAIN), _MM_ONE_POLY)

    @classmethod
    def symbol(cls, sym):
        return cls(SparsePoly.gen(sym, MM_COEFF_DOMAIN), _MM_ONE_POLY)

    @classmethod
    def ev(cls, point, order=0):
        return cls.symbol(MMSymbol(point, order))

    @classmethod
    def make(cls, num, den):
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if num.is_zero:
            return MM_ZERO
        if den.is_const:
            c = den.const_value()
            if c != ONE:
                num = num.scale(ONE / c)
            return cls(num, _MM_ONE_POLY)
        g = poly_gcd(num, den)
        if not g.is_const:
            num = divexact(num, g)
            den = divexact(den, g)
        if den.is_const:
            c = den.const_value()
            if c != ONE:
                num = num.scale(ONE / c)
            return cls(num, _MM_ONE_POLY)
        lc = den.leading_coeff()
        if lc != ONE:
            inv = ONE / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    # -- predicates --------------------------------------------------------

    @property
    def is_const(self):
        return self.num.is_const and self.den.is_const

    def as_scalar(self):
        if not self.is_const:
            raise ValueError("functional is not a scalar constant")
        return self.num.const_value()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = MMElement._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.terms.items()),
                               frozenset(self.den.terms.items())))
        return self._hash

    def support(self):
        """Set of points of all symbols in numerator or denominator."""
        return {g.point for g in self.num.gens() | self.den.gens()}

    def symbols(self):
        return self.num.gens() | self.den.gens()

    def homogeneity_degree(self):
        """Degree with deg E[a;k] = 1, or NOT_HOMOGENEOUS."""
        def poly_degree(p):
            if p.is_zero:
                return 0
            degs = {sum(e for _, e in m) for m in p.terms}
            return degs.pop() if len(degs) == 1 else None

        dn = poly_degree(self.num)
        dd = poly_degree(self.den)
        if dn is None or dd is None:
            return NOT_HOMOGENEOUS
        return dn - dd

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, MMElement):
            return x
        if isinstance(x, (int, Scalar)):
            return MMElement.const(x)
        return None

    def __add__(self, other):
        other = MMElement._coerce(other)
        if other is None:
            return NotImplemented
        d1, d2 = self.den, other.den
        if d1.is_const and d2.is_const:
            return MMElement(self.num + other.num, _MM_ONE_POLY)
        if d1 == d2:
            return MMElement.make(self.num + other.num, d1)
        g = poly_gcd(d1, d2)
        if g.is_const:
            num = self.num * d2 + other.num * d1
            if num.is_zero:
                return MM_ZERO
            return MMElement(num, d1 * d2)
        d2r = divexact(d2, g)
        num = self.num * d2r + other.num * divexact(d1, g)
        if num.is_zero:
            return MM_ZERO
        den = d1 * d2r
        g2 = poly_gcd(num, g)
        if not g2.is_const:
            num = divexact(num, g2)
            den = divexact(den, g2)
        return MMElement(num, den)

    __radd__ = __add__

    def __neg__(self):
        return MMElement(-self.num, self.den)

    def __sub__(self, other):
        other = MMElement._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = MMElement._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return MM_ZERO
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
            if c != ONE:
                num = num.scale(ONE / c)
            return MMElement(num, _MM_ONE_POLY)
        lc = den.leading_coeff()
        if lc != ONE:
            inv = ONE / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return MMElement(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero functional")
        num, den = self.den, self.num
        if den.is_const:
            c = den.const_value()
            if c != ONE:
                num = num.scale(ONE / c)
            return MMElement(num, _MM_ONE_POLY)
        lc = den.leading_coeff()
        if lc != ONE:
            inv = ONE / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return MMElement(num, den)

    def __truediv__(self, other):
        other = MMElement._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return MMElement._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n == 0:
            return MM_ONE
        base = self if n > 0 else self.inverse()
        n = abs(n)
        out = MM_ONE
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- substitution ------------------------------------------------------

    def subs(self, mapping):
        """Substitute scalars for parameters in coefficients and points."""
        def conv(p):
            out = MM_ZERO
            for m, c in p.terms.items():
                term = MMElement.const(c.subs(mapping))
                for sym, e in m:
                    term = term * MMElement.ev(sym.point.subs(mapping), sym.order) ** e
                out = out + term
            return out

        return conv(self.num) / conv(self.den)

    def subs_symbols(self, sym_map):
        """Substitute MMElements for symbols; symbols absent stay."""
        def conv(p):
            out = MM_ZERO
            for m, c in p.terms.items():
                term = MMElement.const(c)
                for sym, e in m:
                    val = sym_map.get(sym)
                    if val is None:
                        val = MMElement.symbol(sym)
                    term = term * val ** e
                out = out + term
            return out

        return conv(self.num) / conv(self.den)

    # -- formatting --------------------------------------------------------

    def __str__(self):
        return format_mm(self)

    __repr__ = __str__


_MM_ONE_POLY = SparsePoly.const(ONE, MM_COEFF_DOMAIN)
MM_ZERO = MMElement(SparsePoly({}, MM_COEFF_DOMAIN), _MM_ONE_POLY)
MM_ONE = MMElement(_MM_ONE_POLY, _MM_ONE_POLY)

MM_DOMAIN = Domain(MM_ZERO, MM_ONE)


class _NotHomogeneous:
    def __repr__(self):
        return "NotHomogeneous"

    def __bool__(self):
        return False


NOT_HOMOGENEOUS = _NotHomogeneous()


def mm_arith(F, G, op):
    if op == "+":
        return F + G
    if op == "-":
        return F - G
    if op == "*":
        return F * G
    if op == "/":
        if not G:
            raise DivisionByZero("division by the zero functional")
        return F / G
    raise ValueError(f"unknown operation {op!r}")


def support(F):
    return F.support()


def homogeneity_degree(F):
    return F.homogeneity_degree()


def _format_mm_poly(p):
    return format_poly(p, gen_str=_sym_str, coeff_str=str, coeff_parens=True)


def format_mm(F):
    ns = _format_mm_poly(F.num)
    if F.den.is_const:
        return ns
    ds = _format_mm_poly(F.den)
    if len(F.num.terms) > 1 or "*" in ns or "^" in ns or "/" in ns:
        ns = f"({ns})"
    if len(F.den.terms) > 1 or "*" in ds or "^" in ds or "/" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


class MMParser(ExprParser):
    def __init__(self):
        self._scalar = ScalarParser()

    def from_int(self, n):
        return MMElement.const(Scalar.from_int(n))

    def parse_atom(self, stream, token):
        name = token.value
        if name == "E" and stream.peek().kind == "[":
            stream.next()
            point = self._scalar.parse_expr(stream)
            stream.expect(";")
            order = self.parse_int(stream)
            tok = stream.peek()
            if order < 0:
                raise ExprSyntaxError("derivative order must be >= 0", tok.column)
            stream.expect("]")
            return MMElement.ev(point, order)
        if not name[0].islower():
            raise ExprSyntaxError(f"invalid name {name!r}", token.column)
        return MMElement.const(Scalar.param(name))


_MM_PARSER = MMParser()


def parse_mm(text):
    return _MM_PARSER.parse(text)

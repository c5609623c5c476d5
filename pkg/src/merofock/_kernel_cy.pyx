# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled monomial/polynomial kernel.

Mirrors _kernel_py.py; keep the two in sync.  Monomials are sorted tuples
of (generator, exponent) pairs; polynomials are dicts mapping monomials to
nonzero coefficients.  Coefficients are arbitrary Python objects with
ring arithmetic (rationals in the hot paths).
"""


def mono_mul(tuple m1, tuple m2):
    """Merge two sorted monomials, adding exponents."""
    cdef Py_ssize_t i = 0, j = 0, n1 = len(m1), n2 = len(m2)
    if n1 == 0:
        return m2
    if n2 == 0:
        return m1
    out = []
    while i < n1 and j < n2:
        g1, e1 = <tuple>m1[i]
        g2, e2 = <tuple>m2[j]
        if g1 == g2:
            out.append((g1, e1 + e2))
            i += 1
            j += 1
        elif g1 < g2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    while i < n1:
        out.append(m1[i])
        i += 1
    while j < n2:
        out.append(m2[j])
        j += 1
    return tuple(out)


def mono_div(tuple m1, tuple m2):
    """Divide monomial m1 by m2; None if not divisible."""
    if len(m2) == 0:
        return m1
    rem = dict(m1)
    out = []
    for g, e in m2:
        have = rem.get(g, 0)
        if have < e:
            return None
        rem[g] = have - e
    for g, e in m1:
        left = rem[g]
        if left > 0:
            out.append((g, left))
    return tuple(out)


def poly_add(dict a, dict b):
    """Add two polynomial dicts."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    for m, c in b.items():
        cur = out.get(m)
        if cur is None:
            out[m] = c
        else:
            s = cur + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_sub(dict a, dict b):
    """Subtract polynomial dict b from a."""
    cdef dict out = dict(a)
    for m, c in b.items():
        cur = out.get(m)
        if cur is None:
            out[m] = -c
        else:
            s = cur - c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_neg(dict a):
    """Negate a polynomial dict."""
    cdef dict out = {}
    for m, c in a.items():
        out[m] = -c
    return out


def poly_scale(dict a, c):
    """Multiply a polynomial dict by a coefficient."""
    if not c:
        return {}
    cdef dict out = {}
    for m, v in a.items():
        p = v * c
        if p:
            out[m] = p
    return out


def poly_mul(dict a, dict b):
    """Multiply two polynomial dicts."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            p = c1 * c2
            if not p:
                continue
            m = mono_mul(<tuple>m1, <tuple>m2)
            cur = out.get(m)
            if cur is None:
                out[m] = p
            else:
                s = cur + p
                if s:
                    out[m] = s
                else:
                    del out[m]
    return out


def texp_mul(tuple e1, tuple e2):
    """Add two exponent vectors stored as tuples (shorter padded with 0)."""
    cdef Py_ssize_t n1 = len(e1), n2 = len(e2), i
    if n1 == 0:
        return e2
    if n2 == 0:
        return e1
    if n1 < n2:
        e1, e2 = e2, e1
        n1, n2 = n2, n1
    out = []
    for i in range(n2):
        out.append(e1[i] + e2[i])
    for i in range(n2, n1):
        out.append(e1[i])
    return tuple(out)


def tpoly_mul(dict a, dict b):
    """Multiply two dicts mapping exponent tuples to rational coefficients."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = texp_mul(<tuple>m1, <tuple>m2)
            cur = out.get(m)
            if cur is None:
                out[m] = c1 * c2
            else:
                s = cur + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
    return out


def tpoly_iadd_scaled(dict acc, dict src, coeff):
    """In-place acc += coeff * src for exponent-tuple dicts."""
    if not coeff:
        return acc
    for m, c in src.items():
        p = c * coeff
        cur = acc.get(m)
        if cur is None:
            acc[m] = p
        else:
            s = cur + p
            if s:
                acc[m] = s
            else:
                del acc[m]
    return acc

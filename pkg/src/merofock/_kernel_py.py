"""Pure-Python monomial/polynomial kernel.

A monomial is a tuple of (generator, exponent) pairs with exponent > 0,
sorted by generator.  The empty tuple is the monomial 1.  A polynomial is
a dict mapping monomials to nonzero coefficients.  Coefficients are any
ring elements supporting +, -, * and truthiness (zero is falsy).

The same functions exist in _kernel_cy.pyx; keep the two in sync.
"""


def mono_mul(m1, m2):
    """Merge two sorted monomials, adding exponents."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1 = len(m1)
    n2 = len(m2)
    while i < n1 and j < n2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
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
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def mono_div(m1, m2):
    """Divide monomial m1 by m2; None if not divisible."""
    if not m2:
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


def poly_add(a, b):
    """Add two polynomial dicts."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
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


def poly_sub(a, b):
    """Subtract polynomial dict b from a."""
    out = dict(a)
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


def poly_neg(a):
    """Negate a polynomial dict."""
    return {m: -c for m, c in a.items()}


def poly_scale(a, c):
    """Multiply a polynomial dict by a coefficient."""
    if not c:
        return {}
    out = {}
    for m, v in a.items():
        p = v * c
        if p:
            out[m] = p
    return out


def poly_mul(a, b):
    """Multiply two polynomial dicts."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            p = c1 * c2
            if not p:
                continue
            m = mono_mul(m1, m2)
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


def texp_mul(e1, e2):
    """Add two exponent vectors stored as tuples (shorter padded with 0)."""
    if not e1:
        return e2
    if not e2:
        return e1
    if len(e1) < len(e2):
        e1, e2 = e2, e1
    n2 = len(e2)
    return tuple(a + e2[i] if i < n2 else a for i, a in enumerate(e1))


def tpoly_mul(a, b):
    """Multiply two dicts mapping exponent tuples to rational coefficients."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = texp_mul(m1, m2)
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


def tpoly_iadd_scaled(acc, src, coeff):
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

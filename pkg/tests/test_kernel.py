"""The compiled kernel must agree with the pure-Python kernel exactly."""

import os
import subprocess
import sys

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from merofock import _kernel, _kernel_py

cy = pytest.importorskip("merofock._kernel_cy")


coeffs = st.builds(mpq, st.integers(-30, 30), st.integers(1, 10))

monomials = st.lists(
    st.tuples(st.sampled_from(["a", "b", "c", "d"]), st.integers(1, 5)),
    unique_by=lambda ge: ge[0], max_size=3,
).map(lambda pairs: tuple(sorted(pairs)))

polys = st.dictionaries(monomials, coeffs, max_size=6).map(
    lambda d: {m: c for m, c in d.items() if c})

texps = st.lists(st.integers(0, 4), max_size=5).map(
    lambda e: tuple(e[:len(e) - next(
        (i for i, x in enumerate(reversed(e)) if x), len(e))]))

tpolys = st.dictionaries(texps, coeffs, max_size=6).map(
    lambda d: {m: c for m, c in d.items() if c})


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_poly_ops_agree(a, b):
    assert cy.poly_add(a, b) == _kernel_py.poly_add(a, b)
    assert cy.poly_sub(a, b) == _kernel_py.poly_sub(a, b)
    assert cy.poly_mul(a, b) == _kernel_py.poly_mul(a, b)
    assert cy.poly_neg(a) == _kernel_py.poly_neg(a)
    assert cy.poly_scale(a, mpq(2, 3)) == _kernel_py.poly_scale(a, mpq(2, 3))
    assert cy.poly_scale(a, mpq(0)) == {}


@settings(max_examples=150, deadline=None)
@given(monomials, monomials)
def test_mono_ops_agree(m1, m2):
    assert cy.mono_mul(m1, m2) == _kernel_py.mono_mul(m1, m2)
    prod = cy.mono_mul(m1, m2)
    assert cy.mono_div(prod, m2) == m1
    assert cy.mono_div(m1, prod) == _kernel_py.mono_div(m1, prod)


@settings(max_examples=150, deadline=None)
@given(tpolys, tpolys, coeffs)
def test_tpoly_ops_agree(a, b, c):
    assert cy.tpoly_mul(a, b) == _kernel_py.tpoly_mul(a, b)
    acc1, acc2 = dict(a), dict(a)
    cy.tpoly_iadd_scaled(acc1, b, c)
    _kernel_py.tpoly_iadd_scaled(acc2, b, c)
    assert acc1 == acc2
    assert all(v for v in acc1.values())


@settings(max_examples=100, deadline=None)
@given(texps, texps)
def test_texp_mul_agrees(e1, e2):
    got = cy.texp_mul(e1, e2)
    assert got == _kernel_py.texp_mul(e1, e2)
    # componentwise sum with zero padding
    n = max(len(e1), len(e2))
    pad = lambda e: e + (0,) * (n - len(e))
    assert got == tuple(x + y for x, y in zip(pad(e1), pad(e2)))


def _backend_of(env_value):
    env = dict(os.environ)
    env.pop("MEROFOCK_PURE", None)
    if env_value is not None:
        env["MEROFOCK_PURE"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "from merofock import _kernel; print(_kernel.BACKEND)"],
        env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_backend_selection():
    assert _kernel.BACKEND in ("cython", "python")
    assert _backend_of(None) == "cython"
    assert _backend_of("1") == "python"
    assert _backend_of("0") == "cython"

#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Two layers are measured:

* micro  -- the raw polynomial-dict kernel functions, called directly on
  both implementations with identical inputs;
* macro  -- an end-to-end vertex-operator workload (a smooth quadratic
  coefficient table on a basis vector), run in a subprocess per backend so
  that import-time backend selection and caches start fresh.

Usage: python bench/bench_kernel.py [--repeat N]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from gmpy2 import mpq

from merofock import _kernel_py

try:
    from merofock import _kernel_cy
except ImportError:
    _kernel_cy = None


def _random_poly(rng, terms, gens, max_exp):
    out = {}
    for _ in range(terms):
        mono = tuple(sorted(
            (f"x{g}", rng.randint(1, max_exp))
            for g in rng.sample(range(gens), rng.randint(0, 3))
        ))
        out[mono] = mpq(rng.randint(-50, 50) or 1, rng.randint(1, 20))
    return out


def _random_tpoly(rng, terms, width):
    out = {}
    for _ in range(terms):
        exps = [0] * rng.randint(0, width)
        for i in range(len(exps)):
            exps[i] = rng.randint(0, 3)
        while exps and exps[-1] == 0:
            exps.pop()
        out[tuple(exps)] = mpq(rng.randint(-50, 50) or 1, rng.randint(1, 20))
    return out


def _time(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_micro(repeat):
    rng = random.Random(7)
    polys = [_random_poly(rng, 60, 6, 4) for _ in range(8)]
    tpolys = [_random_tpoly(rng, 60, 8) for _ in range(8)]
    scale = mpq(3, 7)

    cases = {
        "poly_mul": lambda k: [k.poly_mul(a, b)
                               for a in polys for b in polys],
        "poly_add": lambda k: [k.poly_add(a, b)
                               for a in polys for b in polys],
        "tpoly_mul": lambda k: [k.tpoly_mul(a, b)
                                for a in tpolys for b in tpolys],
        "tpoly_iadd_scaled": lambda k: [
            k.tpoly_iadd_scaled(dict(a), b, scale)
            for a in tpolys for b in tpolys],
    }

    print(f"{'kernel function':<20} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, runner in cases.items():
        t_py = _time(lambda: runner(_kernel_py), repeat)
        if _kernel_cy is None:
            print(f"{name:<20} {t_py * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_cy = _time(lambda: runner(_kernel_cy), repeat)
        print(f"{name:<20} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms "
              f"{t_py / t_cy:>7.2f}x")


_MACRO = """
import time
from merofock._kernel import BACKEND
from merofock.fock import G_table, parse_fock
v = parse_fock("t6*T^-3")
t0 = time.perf_counter()
G_table("smooth", v, (-4, 4), (-4, 4))
print(f"{BACKEND} {time.perf_counter() - t0:.3f}")
"""


def bench_macro():
    print()
    print("macro: smooth coefficient table on t6*T^-3, indices -4..4")
    results = {}
    for pure in ("0", "1"):
        env = dict(os.environ, MEROFOCK_PURE=pure)
        out = subprocess.run([sys.executable, "-c", _MACRO], env=env,
                             capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        results[backend] = float(secs)
        print(f"  backend={backend:<8} {float(secs):.3f}s")
    if "cython" in results and "python" in results:
        print(f"  speedup {results['python'] / results['cython']:.2f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="repetitions per micro case (best time kept)")
    args = ap.parse_args()
    if _kernel_cy is None:
        print("compiled kernel not available; showing pure-Python times only")
    bench_micro(args.repeat)
    bench_macro()


if __name__ == "__main__":
    main()

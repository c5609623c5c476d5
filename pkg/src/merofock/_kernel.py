"""Select the compiled kernel when available, else the pure-Python one.

Set MEROFOCK_PURE=1 to force the pure implementation.
"""

import os

_NAMES = ("mono_mul", "mono_div", "poly_add", "poly_sub", "poly_neg",
          "poly_scale", "poly_mul", "texp_mul", "tpoly_mul",
          "tpoly_iadd_scaled")

if os.environ.get("MEROFOCK_PURE", "") not in ("", "0"):
    from . import _kernel_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernel_cy as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernel_py as _impl
        BACKEND = "python"

(mono_mul, mono_div, poly_add, poly_sub, poly_neg, poly_scale, poly_mul,
 texp_mul, tpoly_mul, tpoly_iadd_scaled) = (getattr(_impl, n) for n in _NAMES)

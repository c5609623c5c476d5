"""Build script: compiles the optional kernel extension when Cython is
available; the package falls back to the pure-Python kernel otherwise."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/merofock/_kernel_cy.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"kernel extension skipped ({exc}); using the pure-Python kernel")

setup(ext_modules=ext_modules)

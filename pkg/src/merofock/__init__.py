"""Exact engine for meromorphic functionals, geometric vertex operators,
their Fock-space localization, and the identity checker built on them."""

from ._kernel import BACKEND as KERNEL_BACKEND  # noqa: F401

__version__ = "0.1.0"

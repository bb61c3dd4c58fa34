"""Twisted Selberg and Ruelle zeta functions, spectral determinants and the identities relating them."""

import importlib

from .kernels import BACKEND

__all__ = ["BACKEND", "errors", "geodata", "harness", "plancherel", "repkit", "spectra", "zetafun"]


def __getattr__(name):
    # Submodules load on first access; scipy and mpmath make eager import slow for short CLI calls.
    if name in __all__:
        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

"""Backend selection for the hot loops.

The compiled extension is used when it was built and DYNZETA_PURE_PYTHON is
not set; otherwise the numpy fallback.  Both expose the same functions.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("DYNZETA_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def euler_log_sum(lengths, angles, chi, n_max, weights, wmult, s, shift, with_denominator, backend=None):
    backend = backend or BACKEND
    args = (
        np.ascontiguousarray(lengths, dtype=np.float64),
        np.ascontiguousarray(angles, dtype=np.float64),
        np.ascontiguousarray(chi, dtype=np.complex128),
        np.ascontiguousarray(n_max, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(wmult, dtype=np.float64),
        complex(s),
        float(shift),
        bool(with_denominator),
    )
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled.euler_log_sum(*args)
    if backend == "python":
        return _pykernels.euler_log_sum(*args)
    raise ValueError(f"unknown backend {backend!r}")

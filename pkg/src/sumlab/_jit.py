"""Kernel dispatch between numba and plain numpy.

Every hot kernel in the package exists twice: a scalar-loop version compiled
with ``numba.njit`` and a vectorized numpy version. ``SUMLAB_DISABLE_NUMBA=1``
(or a missing numba install) selects the numpy versions at import time.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("SUMLAB_DISABLE_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if numba is None:
        return func
    return numba.njit(cache=True)(func)


def select(jit_impl, numpy_impl):
    return jit_impl if USE_NUMBA else numpy_impl

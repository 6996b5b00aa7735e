"""Backend switch for the hot kernels.

Set ``TURANFORGE_NO_NUMBA=1`` to run every kernel as plain Python/numpy.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TURANFORGE_NO_NUMBA", "0").lower() not in {"1", "true", "yes"}

NUMBA_OPTS = {"cache": True, "nogil": True}


def njit(func):
    """Compile ``func`` with numba when enabled, else return it unchanged.

    The undecorated function stays reachable as ``func.py_func`` in both cases,
    so benchmarks can compare the two paths in-process.
    """
    if USE_NUMBA:
        return numba.njit(**NUMBA_OPTS)(func)
    func.py_func = func
    return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "python"

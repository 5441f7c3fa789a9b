"""Numba toggle shared by the hot kernels.

Set ``PREORDGRP_NUMBA=0`` to force the pure-numpy code paths (useful for
debugging and for the benchmark comparison).  When numba is not importable the
numpy paths are used automatically.
"""

import os
from typing import Any, Callable

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba_njit = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("PREORDGRP_NUMBA", "1") not in ("0", "false", "no")


def njit(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Compile lazily with numba; the plain function is kept as ``.py_func``."""
    if not HAVE_NUMBA:
        fn.py_func = fn  # type: ignore[attr-defined]
        return fn
    return _numba_njit(cache=True)(fn)

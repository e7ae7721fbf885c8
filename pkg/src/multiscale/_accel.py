"""Kernel acceleration switch.

Hot loops are written twice: as scalar numba kernels and as vectorized numpy
twins. The numba path is the default; set ``MULTISCALE_DISABLE_NUMBA=1`` (or
run without numba installed) to force the numpy path. Selection happens once
at import time; ``bench --suite backends`` times both regardless of the flag.
"""

import os

_flag = os.environ.get("MULTISCALE_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag in ("1", "true", "yes", "on")

try:
    import numba as _numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but stay importable
    _numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` with ``cache=True`` when enabled, identity otherwise.

    Usable both bare (``@njit``) and with options (``@njit(parallel=True)``).
    With acceleration disabled the decorated function runs interpreted; the
    callers that matter for throughput dispatch to numpy twins instead.
    """
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        if NUMBA_ENABLED:
            return _numba.njit(cache=True)(fn)
        return fn

    def wrap(fn):
        if NUMBA_ENABLED:
            kwargs.setdefault("cache", True)
            return _numba.njit(*args, **kwargs)(fn)
        return fn

    return wrap


if NUMBA_ENABLED:
    prange = _numba.prange
else:
    prange = range

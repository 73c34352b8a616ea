"""Numba toggle for the hot kernels.

The compute kernels in :mod:`bornosc._kernels` are written as plain scalar
numpy code and decorated with ``@njit``.  Setting the environment variable
``BORNOSC_DISABLE_NUMBA=1`` (checked once, at import time) replaces ``njit``
with an identity decorator so the same kernels run as interpreted Python.
That path is slower but bit-for-bit testable against the compiled one; see
``benchmarks/bench_kernels.py`` for the comparison.
"""

import os

_FALSEY = ("", "0", "false", "no", "off")


def _numba_disabled() -> bool:
    return os.environ.get("BORNOSC_DISABLE_NUMBA", "0").strip().lower() not in _FALSEY


NUMBA_ENABLED = False

if not _numba_disabled():
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False

if NUMBA_ENABLED:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        # Identity decorator: @njit and @njit(cache=True) both supported.
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn

        return wrap

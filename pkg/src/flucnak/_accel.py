"""Numba switch.

Hot kernels are written twice: a loop version compiled with ``njit`` and a
vectorised numpy version. ``FLUCNAK_NUMBA=0`` forces the numpy path; the
numpy path is also used when numba is not importable.
"""

import os

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and os.environ.get("FLUCNAK_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)

njit = _njit


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"

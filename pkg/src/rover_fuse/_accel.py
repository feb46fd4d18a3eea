"""Numba switch.

Set ``ROVER_FUSE_DISABLE_NUMBA=1`` to run every kernel on the pure-numpy path.
The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("ROVER_FUSE_DISABLE_NUMBA", "").strip().lower()

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    """Compile ``func`` with numba when available, else return it untouched."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)

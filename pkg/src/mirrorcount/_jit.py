"""numba settings and the pure-numpy fallback switch.

Set ``MIRRORCOUNT_DISABLE_JIT=1`` to skip numba entirely; kernels then
run through their numpy implementations.
"""
import os

_disabled = os.environ.get("MIRRORCOUNT_DISABLE_JIT", "").strip().lower() not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_JIT = numba is not None and not _disabled

numba_default = {
    "nopython": True,
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "boundscheck": False,
}


def njit(func):
    """Compile with the package defaults, or return ``func`` untouched."""
    if not USE_JIT:
        return func
    return numba.jit(**numba_default)(func)

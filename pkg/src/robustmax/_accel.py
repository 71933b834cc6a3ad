"""Optional numba acceleration.

Set ``ROBUSTMAX_DISABLE_NUMBA=1`` to force the pure-numpy kernels, e.g. on
platforms without numba or when debugging. Both paths are always importable
so they can be compared side by side.
"""
import os
import warnings

_FLAG = os.environ.get("ROBUSTMAX_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kw):
        if len(args) == 1 and callable(args[0]) and not kw:
            return args[0]
        return lambda f: f

    if not DISABLED:
        warnings.warn("numba is not installed; using the numpy kernels")

USE_NUMBA = HAVE_NUMBA and not DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = ["njit", "HAVE_NUMBA", "USE_NUMBA", "BACKEND"]

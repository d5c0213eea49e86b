"""Backend selection for the compiled kernels.

Set ``PSPATH_DISABLE_NUMBA=1`` to force the pure Python / numpy fallback.
"""

import os

_FLAG = os.environ.get("PSPATH_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_ENABLED = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def maybe_njit(fn):
    """Compile ``fn`` with numba when enabled, otherwise return it unchanged."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend_name():
    return "numba" if NUMBA_ENABLED else "python"

"""Backend selection for the numeric kernels.

``LMKNN_BACKEND=numba`` (the default when numba imports) runs the compiled
kernels; ``LMKNN_BACKEND=numpy`` forces the vectorised fallback.  The flag is
read once, at import time.
"""

import logging
import os

_log = logging.getLogger(__name__)

ENV_FLAG = "LMKNN_BACKEND"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def requested_backend():
    name = os.environ.get(ENV_FLAG, "").strip().lower() or "numba"
    if name not in ("numba", "numpy"):
        raise ValueError(f"{ENV_FLAG} must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        _log.warning("numba is not importable; falling back to the numpy backend")
        return "numpy"
    return name


def set_threads(n):
    """Limit compiled kernels to ``n`` threads (no-op without numba)."""
    if HAVE_NUMBA:
        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def max_threads():
    return numba.config.NUMBA_NUM_THREADS if HAVE_NUMBA else 1

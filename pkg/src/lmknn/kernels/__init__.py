"""Kernel dispatch.

``jit`` and ``numpy_backend`` are always importable for direct comparison
(``jit`` is None without numba); the module-level functions route to whichever
backend ``LMKNN_BACKEND`` selected.
"""

import numpy as np

from .. import _backend
from . import _numpy as numpy_backend

try:
    from . import _jit as jit
except ImportError:  # pragma: no cover
    jit = None

BACKEND = _backend.requested_backend()
_impl = jit if BACKEND == "numba" else numpy_backend


def backend_module(name=None):
    if name is None:
        return _impl
    if name == "numba":
        if jit is None:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return jit
    if name == "numpy":
        return numpy_backend
    raise ValueError(f"unknown backend {name!r}")


def pairwise_sparse(indptr, indices, values, measure, min_overlap, backend=None):
    return backend_module(backend).pairwise_sparse(indptr, indices, values, int(measure), int(min_overlap))


def cross_sparse(indptr, indices, values, rows, targets, measure, min_overlap, backend=None):
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    targets = np.ascontiguousarray(targets, dtype=np.int64)
    return backend_module(backend).cross_sparse(indptr, indices, values, rows, targets, int(measure), int(min_overlap))


def pairwise_dense(h, measure, min_overlap, backend=None):
    return backend_module(backend).pairwise_dense(np.ascontiguousarray(h, dtype=np.float64), int(measure),
                                                  int(min_overlap))


def predict_pairs(sim, row_means, global_mean, col_indptr, col_indices, col_values, test_rows, test_cols,
                  k, min_neighbors, positive_only, v_min, v_max, step=0.0, backend=None):
    return backend_module(backend).predict_pairs(
        sim, row_means, float(global_mean), col_indptr, col_indices, col_values,
        np.ascontiguousarray(test_rows, dtype=np.int64), np.ascontiguousarray(test_cols, dtype=np.int64),
        int(k), int(min_neighbors), bool(positive_only), float(v_min), float(v_max), float(step or 0.0),
    )


def warmup():
    """Compile every kernel on a toy input so timings exclude JIT cost."""
    if _impl is not jit:
        return
    indptr = np.array([0, 2, 4], dtype=np.int64)
    indices = np.array([0, 1, 0, 1], dtype=np.int64)
    values = np.array([1.0, 2.0, 2.0, 1.0])
    for measure in (0, 1, 2):
        s = pairwise_sparse(indptr, indices, values, measure, 2)
        h = cross_sparse(indptr, indices, values, [0, 1], [0], measure, 2)
        pairwise_dense(h, measure, 1)
    predict_pairs(s, np.array([1.5, 1.5]), 1.5, indptr, indices, values, [0], [1], 1, 1, True, 1.0, 5.0, 1.0)

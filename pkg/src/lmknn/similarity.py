"""Rating-space similarity between two rows of a view.

All three measures look only at co-rated columns and need at least two of
them; otherwise the result is :data:`UNDEFINED`.  The scalar functions are
plain Python and accumulate in ascending column order, which is also the order
the compiled matrix kernel uses.
"""

import math

from . import kernels
from .measures import UNDEFINED, Measure, is_defined  # noqa: F401  (re-exported)
from .ratings import EntityView, corated_items

MIN_CORATED = 2


def cosine(view: EntityView, a, b):
    """Cosine of the raw (uncentred) co-rated rating vectors."""
    pairs = corated_items(view, a, b)
    if len(pairs) < MIN_CORATED:
        return UNDEFINED
    z = x = y = 0.0
    for _, ra, rb in pairs:
        z += ra * rb
        x += ra * ra
        y += rb * rb
    norm = x * y
    if norm == 0.0:
        return UNDEFINED
    return z / math.sqrt(norm)


def pearson(view: EntityView, a, b):
    """Correlation of co-rated ratings, each side centred on its co-rated mean."""
    pairs = corated_items(view, a, b)
    n = len(pairs)
    if n < MIN_CORATED:
        return UNDEFINED
    sa = sb = 0.0
    for _, ra, rb in pairs:
        sa += ra
        sb += rb
    ma, mb = sa / n, sb / n
    z = x = y = 0.0
    for _, ra, rb in pairs:
        da, db = ra - ma, rb - mb
        z += da * db
        x += da * da
        y += db * db
    norm = x * y
    if norm == 0.0:
        return UNDEFINED
    return z / math.sqrt(norm)


def euclidean_similarity(view: EntityView, a, b):
    """``1 / (1 + d)`` with ``d`` the Euclidean distance over co-rated items."""
    pairs = corated_items(view, a, b)
    if len(pairs) < MIN_CORATED:
        return UNDEFINED
    d2 = 0.0
    for _, ra, rb in pairs:
        diff = ra - rb
        d2 += diff * diff
    return 1.0 / (1.0 + math.sqrt(d2))


_SCALAR = {Measure.EUCLIDEAN: euclidean_similarity, Measure.COSINE: cosine, Measure.PEARSON: pearson}


def similarity(view: EntityView, a, b, measure):
    return _SCALAR[Measure.parse(measure)](view, a, b)


def similarity_matrix(view: EntityView, measure, backend=None):
    """Dense rows x rows similarity matrix; the diagonal is UNDEFINED."""
    if view.n_rows == 0:
        raise ValueError("view has no rows")
    rows = view.rows
    return kernels.pairwise_sparse(rows.indptr, rows.indices, rows.values, Measure.parse(measure), MIN_CORATED,
                                   backend=backend)

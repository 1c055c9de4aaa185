"""Mean-centred kNN rating prediction over a precomputed similarity matrix."""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import kernels
from .ratings import EntityView


class Source(Enum):
    KNN = "knn"
    ROW_MEAN = "user-mean-fallback"
    GLOBAL_MEAN = "global-mean-fallback"


_SOURCES = (Source.KNN, Source.ROW_MEAN, Source.GLOBAL_MEAN)


@dataclass(frozen=True)
class PredictorConfig:
    """``k`` neighbours; ``positive_only=False`` admits nonpositive similarities.

    ``rating_step`` > 0 rounds every prediction (half up) onto the rating
    grid ``v_min, v_min + step, ...``; ``None`` keeps continuous values.
    """

    k: int = 13
    min_neighbors: int = 1
    positive_only: bool = True
    rating_step: float = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.rating_step is not None and self.rating_step < 0:
            raise ValueError(f"rating_step must be positive, got {self.rating_step}")
        if self.min_neighbors < 1:
            raise ValueError(f"min_neighbors must be >= 1, got {self.min_neighbors}")


class Prediction(NamedTuple):
    value: float
    source: Source
    neighbors_used: int


@dataclass(frozen=True, eq=False)
class BatchPrediction:
    """Column form of many predictions; ``sources`` holds codes into ``Source``."""

    values: np.ndarray
    sources: np.ndarray
    neighbors_used: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return Prediction(float(self.values[i]), _SOURCES[self.sources[i]], int(self.neighbors_used[i]))

    def source_counts(self):
        counts = np.bincount(self.sources.astype(np.int64), minlength=3)
        return {src.value: int(c) for src, c in zip(_SOURCES, counts)}


def predict_batch(view: EntityView, S, rows, cols, cfg=PredictorConfig(), backend=None) -> BatchPrediction:
    """Predict the rating at each ``(rows[t], cols[t])`` of ``view``.

    Neighbours of row ``a`` for column ``c`` are the other rows that rated
    ``c`` and have a defined, positive ``S[a, b]``; the ``k`` most similar are
    kept (ascending id on ties).  Rows with no neighbours fall back to their
    own mean, rows with no ratings to the global mean.  Results are clamped to
    the rating scale (and snapped to its grid when ``cfg.rating_step`` is set).
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if len(rows) != len(cols):
        raise ValueError("rows and cols differ in length")
    if len(rows) == 0:
        empty = np.zeros(0)
        return BatchPrediction(empty, np.zeros(0, dtype=np.int8), np.zeros(0, dtype=np.int64))
    if rows.min() < 0 or rows.max() >= view.n_rows or cols.min() < 0 or cols.max() >= view.n_cols:
        raise IndexError("test pair outside the view")
    S = np.asarray(S, dtype=np.float64)
    if S.shape != (view.n_rows, view.n_rows):
        raise ValueError(f"similarity matrix shape {S.shape} does not match {view.n_rows} rows")
    c = view.cols
    v_min, v_max = view.scale
    values, sources, used = kernels.predict_pairs(
        S, view.row_means, view.global_mean, c.indptr, c.indices, c.values, rows, cols,
        cfg.k, cfg.min_neighbors, cfg.positive_only, v_min, v_max, cfg.rating_step, backend=backend,
    )
    return BatchPrediction(values, sources, used)


def predict(view: EntityView, S, u, v, cfg=PredictorConfig(), backend=None) -> Prediction:
    return predict_batch(view, S, [u], [v], cfg, backend=backend)[0]

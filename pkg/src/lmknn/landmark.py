"""Landmark selection and the landmark-space similarity matrix.

Every row is re-described by its similarity (``d1``) to ``n`` chosen landmark
rows; row-to-row similarity (``d2``) is then computed on those ``n``
coordinates instead of the full rating rows.  Coordinates where either side is
UNDEFINED are skipped.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .measures import UNDEFINED, Measure
from .ratings import EntityView
from .rng import PCG32
from .similarity import MIN_CORATED

_log = logging.getLogger(__name__)

# landmark space skips undefined coordinates and needs only one shared one
LANDMARK_MIN_OVERLAP = 1


class Strategy(Enum):
    RANDOM = "random"
    DIST_OF_RATINGS = "dist-of-ratings"
    CORESETS = "coresets"
    CORESETS_RANDOM = "coresets-random"
    POPULARITY = "popularity"

    @classmethod
    def parse(cls, name):
        if isinstance(name, Strategy):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {"distofratings": "dist-of-ratings", "dist": "dist-of-ratings",
                   "coresetsrandom": "coresets-random"}
        key = aliases.get(key.replace("-", ""), key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown landmark strategy {name!r}; expected one of "
                             f"{', '.join(s.value for s in cls)}") from None


@dataclass(frozen=True, eq=False)
class LandmarkSet:
    ids: np.ndarray
    strategy: Strategy
    seed: int
    rounds: int = 0
    topped_up: int = 0
    rating_counts: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.ids)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rank", "entity_id", "rating_count"])
            for rank, (eid, cnt) in enumerate(zip(self.ids, self.rating_counts)):
                w.writerow([rank, int(eid), int(cnt)])


@dataclass(frozen=True, eq=False)
class LandmarkEmbedding:
    H: np.ndarray
    landmarks: LandmarkSet
    d1: Measure


def _popularity(counts, n):
    # descending count, ascending id on ties
    order = np.lexsort((np.arange(len(counts)), -counts))
    return order[:n]


def _coresets(view, n, rng, d1, weighted):
    counts = view.row_counts()
    rows = view.rows
    pool = np.arange(view.n_rows)
    previous = None  # (candidates, their scores) from the last pruning round
    rounds = 0
    while True:
        rounds += 1
        if len(pool) <= n:
            if weighted:
                cand = rng.weighted_sample(pool, counts[pool], len(pool), zero_weight="uniform")
            else:
                cand = rng.sample(pool, len(pool))
            cand = [int(c) for c in cand]
            topped = 0
            if len(cand) < n:
                prev_ids, prev_scores = previous
                order = np.lexsort((prev_ids, -prev_scores))
                have = set(cand)
                for c in prev_ids[order]:
                    if len(cand) == n:
                        break
                    if int(c) not in have:
                        cand.append(int(c))
                        have.add(int(c))
                        topped += 1
            return np.array(cand, dtype=np.int64), rounds, topped

        if weighted:
            cand = rng.weighted_sample(pool, counts[pool], n, zero_weight="uniform")
        else:
            cand = rng.sample(pool, n)
        cand = np.array(cand, dtype=np.int64)
        sims = kernels.cross_sparse(rows.indptr, rows.indices, rows.values, pool, cand, d1, MIN_CORATED)
        score = sims.max(axis=1)
        # most similar first, ascending id on ties; UNDEFINED (-inf) sorts last
        order = np.lexsort((pool, -score))
        drop = math.ceil(len(pool) / 2)
        cand_pos = np.searchsorted(pool, cand)
        previous = (cand, score[cand_pos])
        pool = np.sort(pool[order[drop:]])


def select_landmarks(view: EntityView, strategy, n, seed=0, d1=Measure.COSINE, stream=1) -> LandmarkSet:
    """Pick ``n`` distinct landmark rows of ``view``.

    ``stream`` selects an independent PCG32 sequence for the same seed (the
    evaluation loop uses one stream per fold).
    """
    strategy = Strategy.parse(strategy)
    d1 = Measure.parse(d1)
    if not 1 <= n <= view.n_rows:
        raise ValueError(f"cannot select {n} landmarks from {view.n_rows} rows")
    counts = view.row_counts()
    rng = PCG32(seed, stream)
    rounds = topped = 0
    if strategy is Strategy.RANDOM:
        ids = np.array(rng.sample(range(view.n_rows), n), dtype=np.int64)
    elif strategy is Strategy.DIST_OF_RATINGS:
        ids = np.array(rng.weighted_sample(np.arange(view.n_rows), counts, n), dtype=np.int64)
    elif strategy is Strategy.POPULARITY:
        ids = _popularity(counts, n).astype(np.int64)
    else:
        ids, rounds, topped = _coresets(view, n, rng, d1, weighted=strategy is Strategy.CORESETS)
        if topped:
            _log.info("coresets final pool short by %d; topped up from previous candidates", topped)
    return LandmarkSet(ids=ids, strategy=strategy, seed=seed, rounds=rounds, topped_up=topped,
                       rating_counts=counts[ids])


def build_embedding(view: EntityView, landmarks, d1=Measure.COSINE) -> LandmarkEmbedding:
    """``H[u, j] = d1(u, landmarks[j])`` over the original rating columns."""
    d1 = Measure.parse(d1)
    if not isinstance(landmarks, LandmarkSet):
        ids = np.asarray(landmarks, dtype=np.int64)
        landmarks = LandmarkSet(ids=ids, strategy=None, seed=None, rating_counts=view.row_counts()[ids])
    rows = view.rows
    H = kernels.cross_sparse(rows.indptr, rows.indices, rows.values, np.arange(view.n_rows), landmarks.ids, d1,
                             MIN_CORATED)
    return LandmarkEmbedding(H=H, landmarks=landmarks, d1=d1)


def _as_matrix(H):
    return H.H if isinstance(H, LandmarkEmbedding) else np.asarray(H, dtype=np.float64)


def landmark_similarity(H, a, b, measure=Measure.COSINE):
    """Similarity of rows ``a`` and ``b`` over their shared defined coordinates."""
    H = _as_matrix(H)
    measure = Measure.parse(measure)
    shared = [(x, y) for x, y in zip(H[a], H[b]) if x != UNDEFINED and y != UNDEFINED]
    n = len(shared)
    if n < LANDMARK_MIN_OVERLAP:
        return UNDEFINED
    if measure is Measure.EUCLIDEAN:
        d2 = 0.0
        for x, y in shared:
            d2 += (x - y) * (x - y)
        return 1.0 / (1.0 + math.sqrt(d2))
    if measure is Measure.PEARSON:
        sa = sb = 0.0
        for x, y in shared:
            sa += x
            sb += y
        ma, mb = sa / n, sb / n
        shared = [(x - ma, y - mb) for x, y in shared]
    z = xx = yy = 0.0
    for x, y in shared:
        z += x * y
        xx += x * x
        yy += y * y
    norm = xx * yy
    if norm == 0.0:
        return UNDEFINED
    return z / math.sqrt(norm)


def landmark_cosine(H, a, b):
    return landmark_similarity(H, a, b, Measure.COSINE)


def landmark_similarity_matrix(H, d2=Measure.COSINE, backend=None):
    """Rows x rows ``d2`` similarity in landmark space; diagonal UNDEFINED."""
    return kernels.pairwise_dense(_as_matrix(H), Measure.parse(d2), LANDMARK_MIN_OVERLAP, backend=backend)

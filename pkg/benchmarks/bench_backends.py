"""Compare the numba kernels with the numpy fallback on one training fold.

    python3 benchmarks/bench_backends.py [--dataset data/ml-100k/u.data] [--repeat 3]

Without a dataset a synthetic 943 x 1682 matrix at 6.3% density is used.
Prints best-of-``repeat`` seconds per kernel and the numpy/numba ratio.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from lmknn import (DatasetSpec, Measure, PredictorConfig, build_embedding, build_matrix, kfold_split,
                   landmark_similarity_matrix, load, predict_batch, select_landmarks, similarity_matrix)
from lmknn import _backend, kernels


def _synthetic(seed=0):
    rng = np.random.default_rng(seed)
    mask = rng.random((943, 1682)) < 0.063
    users, items = np.nonzero(mask)
    values = rng.integers(1, 6, size=len(users)).astype(float)
    return users, items, values, 943, 1682


def _fold(args):
    if args.dataset and Path(args.dataset).exists():
        data = load(DatasetSpec(args.dataset))
        r = data.ratings
        users, items, values, nu, ni = r.users, r.items, r.values, data.num_users, data.num_items
    else:
        users, items, values, nu, ni = _synthetic()
    folds = kfold_split(len(users), 10, 0)
    tr, te = folds.train_index(0), folds.test_index(0)
    matrix = build_matrix(zip(users[tr], items[tr], values[tr]), nu, ni)
    return matrix.user_view(), users[te], items[te]


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", default="data/ml-100k/u.data")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--landmarks", type=int, default=20)
    args = ap.parse_args()

    _backend.set_threads(1)
    kernels.warmup()
    view, rows, cols = _fold(args)
    lm = select_landmarks(view, "popularity", args.landmarks)
    H = build_embedding(view, lm).H
    S = similarity_matrix(view, Measure.COSINE)

    cases = {
        "similarity cosine": lambda b: similarity_matrix(view, Measure.COSINE, backend=b),
        "similarity pearson": lambda b: similarity_matrix(view, Measure.PEARSON, backend=b),
        f"landmark cosine n={args.landmarks}": lambda b: landmark_similarity_matrix(H, Measure.COSINE, backend=b),
        "predict k=13": lambda b: predict_batch(view, S, rows, cols, PredictorConfig(rating_step=1.0), backend=b),
    }
    print(f"{view.n_rows} rows, {view.matrix.n_ratings} training ratings, {len(rows)} test pairs, 1 thread")
    print(f"{'kernel':28s} {'numba_s':>9s} {'numpy_s':>9s} {'ratio':>7s}")
    for name, fn in cases.items():
        t_jit = _best(lambda: fn("numba"), args.repeat)
        t_np = _best(lambda: fn("numpy"), args.repeat)
        print(f"{name:28s} {t_jit:9.4f} {t_np:9.4f} {t_np / t_jit:7.1f}")


if __name__ == "__main__":
    main()

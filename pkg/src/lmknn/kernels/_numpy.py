"""Vectorised numpy fallback for the compiled kernels.

Cosine comes from dense masked matrix products.  Euclidean and Pearson are
computed one row against all others on explicit differences and deviations,
since the expanded-sum forms cancel badly for near-equal or near-constant
rows.  Summation order differs from the compiled path, so values agree to
~1e-12 rather than bitwise.
"""

import numpy as np

EUCLIDEAN, COSINE, PEARSON = 0, 1, 2
NEG_INF = -np.inf


def _densify(indptr, indices, values, rows, n_cols):
    lengths = np.diff(indptr)[rows]
    out = np.zeros((len(rows), n_cols))
    mask = np.zeros((len(rows), n_cols))
    owner = np.repeat(np.arange(len(rows)), lengths)
    cols = np.concatenate([indices[indptr[r]:indptr[r + 1]] for r in rows]) if len(rows) else np.zeros(0, int)
    vals = np.concatenate([values[indptr[r]:indptr[r + 1]] for r in rows]) if len(rows) else np.zeros(0)
    out[owner, cols] = vals
    mask[owner, cols] = 1.0
    return out, mask


def _masked_cosine(xa, ma, xb, mb):
    z = xa @ xb.T
    norm = ((xa * xa) @ mb.T) * (ma @ (xb * xb).T)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = z / np.sqrt(norm)
    out[norm == 0.0] = NEG_INF
    return out


def _row_against(xa_i, ma_i, xb, mb, measure):
    m = ma_i * mb
    count = m.sum(axis=1)
    safe = np.where(count > 0, count, 1.0)
    if measure == EUCLIDEAN:
        diff = (xa_i - xb) * m
        return 1.0 / (1.0 + np.sqrt((diff * diff).sum(axis=1)))
    mean_a = (xa_i * m).sum(axis=1) / safe
    mean_b = (xb * m).sum(axis=1) / safe
    da = (xa_i - mean_a[:, None]) * m
    db = (xb - mean_b[:, None]) * m
    norm = (da * da).sum(axis=1) * (db * db).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (da * db).sum(axis=1) / np.sqrt(norm)
    out[norm == 0.0] = NEG_INF
    return out


def _masked_similarity(xa, ma, xb, mb, measure, min_overlap):
    """Similarity of every row of (xa, ma) with every row of (xb, mb)."""
    count = ma @ mb.T
    if measure == COSINE:
        out = _masked_cosine(xa, ma, xb, mb)
    else:
        out = np.empty(count.shape)
        for i in range(xa.shape[0]):
            out[i] = _row_against(xa[i], ma[i], xb, mb, measure)
    out[(count < min_overlap) | (count == 0)] = NEG_INF
    return out


def _symmetrise(s):
    iu = np.triu_indices(s.shape[0], 1)
    s.T[iu] = s[iu]
    np.fill_diagonal(s, NEG_INF)
    return s


def pairwise_sparse(indptr, indices, values, measure, min_overlap):
    n = len(indptr) - 1
    n_cols = int(indices.max()) + 1 if len(indices) else 1
    xa, ma = _densify(indptr, indices, values, np.arange(n), n_cols)
    return _symmetrise(_masked_similarity(xa, ma, xa, ma, measure, min_overlap))


def cross_sparse(indptr, indices, values, rows, targets, measure, min_overlap):
    n_cols = int(indices.max()) + 1 if len(indices) else 1
    xa, ma = _densify(indptr, indices, values, np.asarray(rows), n_cols)
    xb, mb = _densify(indptr, indices, values, np.asarray(targets), n_cols)
    return _masked_similarity(xa, ma, xb, mb, measure, min_overlap)


def pairwise_dense(h, measure, min_overlap):
    mask = np.isfinite(h).astype(np.float64)
    x = np.where(mask > 0, h, 0.0)
    return _symmetrise(_masked_similarity(x, mask, x, mask, measure, min_overlap))


def predict_pairs(sim, row_means, global_mean, col_indptr, col_indices, col_values,
                  test_rows, test_cols, k, min_neighbors, positive_only, v_min, v_max, step):
    m = len(test_rows)
    preds = np.empty(m)
    sources = np.zeros(m, dtype=np.int8)
    used = np.zeros(m, dtype=np.int64)
    for t in range(m):
        a = test_rows[t]
        c = test_cols[t]
        lo, hi = col_indptr[c], col_indptr[c + 1]
        raters = col_indices[lo:hi]
        s = sim[a, raters]
        keep = (raters != a) & np.isfinite(s)
        if positive_only:
            keep &= s > 0.0
        idx = np.flatnonzero(keep)
        mean_a = row_means[a]
        if np.isnan(mean_a):
            value, source, cnt = global_mean, 2, 0
        elif len(idx) < min_neighbors:
            value, source, cnt = mean_a, 1, 0
        else:
            order = np.lexsort((raters[idx], -s[idx]))[:k]
            sel = idx[order]
            w = s[sel]
            dev = col_values[lo:hi][sel] - row_means[raters[sel]]
            den = w.sum()
            if den == 0.0:
                value, source, cnt = mean_a, 1, 0
            else:
                value, source, cnt = mean_a + (w * dev).sum() / den, 0, len(sel)
        if step > 0.0:
            value = v_min + np.floor((value - v_min) / step + 0.5) * step
        preds[t] = min(max(value, v_min), v_max)
        sources[t] = source
        used[t] = cnt
    return preds, sources, used

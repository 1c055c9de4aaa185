"""Compiled kernels.

Every similarity accumulates sequentially in ascending column order, the same
order a per-pair Python loop uses, so results are bitwise reproducible against
a straightforward reference implementation.  ``fastmath`` stays off for that
reason.
"""

import numpy as np
from numba import njit, prange

EUCLIDEAN, COSINE, PEARSON = 0, 1, 2
NEG_INF = -np.inf


@njit(cache=True)
def _finish(measure, n, sa, sb, z, x, y, d2, min_overlap):
    # Pearson needs a second pass and is handled by the callers
    if n < min_overlap or n == 0:
        return NEG_INF
    if measure == EUCLIDEAN:
        return 1.0 / (1.0 + np.sqrt(d2))
    norm = x * y
    if norm == 0.0:
        return NEG_INF
    return z / np.sqrt(norm)


@njit(cache=True)
def sparse_pair(ia, va, ib, vb, measure, min_overlap):
    """Similarity of two sorted sparse rows over their shared columns."""
    na, nb = ia.shape[0], ib.shape[0]
    n = 0
    sa = 0.0
    sb = 0.0
    z = 0.0
    x = 0.0
    y = 0.0
    d2 = 0.0
    p = 0
    q = 0
    while p < na and q < nb:
        if ia[p] == ib[q]:
            ra = va[p]
            rb = vb[q]
            n += 1
            sa += ra
            sb += rb
            z += ra * rb
            x += ra * ra
            y += rb * rb
            diff = ra - rb
            d2 += diff * diff
            p += 1
            q += 1
        elif ia[p] < ib[q]:
            p += 1
        else:
            q += 1
    if measure != PEARSON:
        return _finish(measure, n, sa, sb, z, x, y, d2, min_overlap)
    if n < min_overlap or n == 0:
        return NEG_INF
    ma = sa / n
    mb = sb / n
    z = 0.0
    x = 0.0
    y = 0.0
    p = 0
    q = 0
    while p < na and q < nb:
        if ia[p] == ib[q]:
            da = va[p] - ma
            db = vb[q] - mb
            z += da * db
            x += da * da
            y += db * db
            p += 1
            q += 1
        elif ia[p] < ib[q]:
            p += 1
        else:
            q += 1
    norm = x * y
    if norm == 0.0:
        return NEG_INF
    return z / np.sqrt(norm)


@njit(cache=True)
def dense_pair(ha, hb, measure, min_overlap):
    """Similarity of two dense vectors over coordinates where both are finite."""
    m = ha.shape[0]
    n = 0
    sa = 0.0
    sb = 0.0
    z = 0.0
    x = 0.0
    y = 0.0
    d2 = 0.0
    for j in range(m):
        a = ha[j]
        b = hb[j]
        if a != NEG_INF and b != NEG_INF:
            n += 1
            sa += a
            sb += b
            z += a * b
            x += a * a
            y += b * b
            diff = a - b
            d2 += diff * diff
    if measure != PEARSON:
        return _finish(measure, n, sa, sb, z, x, y, d2, min_overlap)
    if n < min_overlap or n == 0:
        return NEG_INF
    ma = sa / n
    mb = sb / n
    z = 0.0
    x = 0.0
    y = 0.0
    for j in range(m):
        a = ha[j]
        b = hb[j]
        if a != NEG_INF and b != NEG_INF:
            da = a - ma
            db = b - mb
            z += da * db
            x += da * da
            y += db * db
    norm = x * y
    if norm == 0.0:
        return NEG_INF
    return z / np.sqrt(norm)


@njit(cache=True, parallel=True)
def pairwise_sparse(indptr, indices, values, measure, min_overlap):
    n = indptr.shape[0] - 1
    out = np.full((n, n), NEG_INF)
    for a in prange(n):
        ia = indices[indptr[a]:indptr[a + 1]]
        va = values[indptr[a]:indptr[a + 1]]
        for b in range(a + 1, n):
            s = sparse_pair(ia, va, indices[indptr[b]:indptr[b + 1]], values[indptr[b]:indptr[b + 1]],
                            measure, min_overlap)
            out[a, b] = s
            out[b, a] = s
    return out


@njit(cache=True, parallel=True)
def cross_sparse(indptr, indices, values, rows, targets, measure, min_overlap):
    out = np.empty((rows.shape[0], targets.shape[0]))
    for i in prange(rows.shape[0]):
        a = rows[i]
        ia = indices[indptr[a]:indptr[a + 1]]
        va = values[indptr[a]:indptr[a + 1]]
        for j in range(targets.shape[0]):
            b = targets[j]
            out[i, j] = sparse_pair(ia, va, indices[indptr[b]:indptr[b + 1]], values[indptr[b]:indptr[b + 1]],
                                    measure, min_overlap)
    return out


@njit(cache=True, parallel=True)
def pairwise_dense(h, measure, min_overlap):
    n = h.shape[0]
    out = np.full((n, n), NEG_INF)
    for a in prange(n):
        for b in range(a + 1, n):
            s = dense_pair(h[a], h[b], measure, min_overlap)
            out[a, b] = s
            out[b, a] = s
    return out


@njit(cache=True, parallel=True)
def predict_pairs(sim, row_means, global_mean, col_indptr, col_indices, col_values,
                  test_rows, test_cols, k, min_neighbors, positive_only, v_min, v_max, step):
    m = test_rows.shape[0]
    preds = np.empty(m)
    sources = np.zeros(m, dtype=np.int8)
    used = np.zeros(m, dtype=np.int64)
    for t in prange(m):
        a = test_rows[t]
        c = test_cols[t]
        lo = col_indptr[c]
        hi = col_indptr[c + 1]
        top_s = np.empty(k)
        top_p = np.empty(k, dtype=np.int64)
        cnt = 0
        # raters arrive in ascending row id; strict '>' keeps the lower id on ties
        for p in range(lo, hi):
            b = col_indices[p]
            if b == a:
                continue
            s = sim[a, b]
            if s == NEG_INF:
                continue
            if positive_only and not s > 0.0:
                continue
            if cnt == k and not s > top_s[k - 1]:
                continue
            pos = cnt if cnt < k else k - 1
            while pos > 0 and s > top_s[pos - 1]:
                if pos < k:
                    top_s[pos] = top_s[pos - 1]
                    top_p[pos] = top_p[pos - 1]
                pos -= 1
            top_s[pos] = s
            top_p[pos] = p
            if cnt < k:
                cnt += 1
        mean_a = row_means[a]
        value = 0.0
        source = 0
        if np.isnan(mean_a):
            value = global_mean
            source = 2
            cnt = 0
        elif cnt < min_neighbors:
            value = mean_a
            source = 1
            cnt = 0
        else:
            num = 0.0
            den = 0.0
            for r in range(cnt):
                p = top_p[r]
                num += top_s[r] * (col_values[p] - row_means[col_indices[p]])
                den += top_s[r]
            if den == 0.0:
                value = mean_a
                source = 1
                cnt = 0
            else:
                value = mean_a + num / den
        if step > 0.0:
            value = v_min + np.floor((value - v_min) / step + 0.5) * step
        if value < v_min:
            value = v_min
        elif value > v_max:
            value = v_max
        preds[t] = value
        sources[t] = source
        used[t] = cnt
    return preds, sources, used

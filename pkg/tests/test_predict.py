import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import matrix_from, rating_triples
from lmknn import Measure, PredictorConfig, build_matrix, predict, predict_batch, similarity_matrix
from lmknn.predict import Source

NEG = -np.inf


def _single_neighbor():
    # user 0 mean 3 (rated items 1, 2), user 1 mean 2 and rated item 0 with 4
    recs = [(0, 1, 2), (0, 2, 4), (1, 0, 4), (1, 1, 1), (1, 2, 1)]
    v = build_matrix(recs, 2, 3).user_view()
    S = np.array([[NEG, 1.0], [1.0, NEG]])
    return v, S


def test_single_neighbor_example():
    v, S = _single_neighbor()
    p = predict(v, S, 0, 0, PredictorConfig(k=1))
    assert p.value == pytest.approx(5.0, abs=1e-12)
    assert p.source is Source.KNN and p.neighbors_used == 1


def test_no_rater_falls_back_to_mean():
    v, S = _single_neighbor()
    S = np.full((2, 2), NEG)
    p = predict(v, S, 0, 0)
    assert p.value == 3.0 and p.source is Source.ROW_MEAN


def test_unrated_row_uses_global_mean():
    v = build_matrix([(0, 0, 2), (0, 1, 4)], 2, 2).user_view()
    p = predict(v, np.full((2, 2), NEG), 1, 0)
    assert p.value == 3.0 and p.source is Source.GLOBAL_MEAN


def test_clamped():
    # the kNN rule gives 3 + 2.7 = 5.7 on a 1..5 scale
    recs = [(0, 1, 2), (0, 2, 4), (1, 0, 4.7), (1, 1, 1), (1, 2, 0.3)]
    v = build_matrix(recs, 2, 3, scale=(0, 5)).user_view()
    S = np.array([[NEG, 1.0], [1.0, NEG]])
    assert predict(v, S, 0, 0).value == 5.0


def test_rating_step_rounds_half_up():
    v, S = _single_neighbor()
    S = np.array([[NEG, 1.0], [1.0, NEG]])
    recs = [(0, 1, 2), (0, 2, 3), (1, 0, 4), (1, 1, 1), (1, 2, 3)]
    v = build_matrix(recs, 2, 3).user_view()
    # 2.5 + (4 - 8/3) = 3.833...
    assert predict(v, S, 0, 0).value == pytest.approx(2.5 + 4 - 8 / 3)
    assert predict(v, S, 0, 0, PredictorConfig(rating_step=1.0)).value == 4.0
    assert predict(v, S, 0, 0, PredictorConfig(rating_step=0.5)).value == 4.0


def test_empty_batch():
    v, S = _single_neighbor()
    assert len(predict_batch(v, S, [], [])) == 0


def test_bad_inputs():
    v, S = _single_neighbor()
    with pytest.raises(IndexError):
        predict(v, S, 0, 3)
    with pytest.raises(ValueError):
        predict_batch(v, S, [0, 1], [0])
    with pytest.raises(ValueError):
        predict(v, np.zeros((3, 3)), 0, 0)
    with pytest.raises(ValueError):
        PredictorConfig(k=0)


def test_top_k_prefers_more_similar_then_lower_id():
    # users 1..3 rated item 0; user 0 predicts with k=1
    recs = [(0, 1, 3), (1, 0, 5), (1, 1, 3), (2, 0, 1), (2, 1, 3), (3, 0, 2), (3, 1, 3)]
    v = build_matrix(recs, 4, 2).user_view()
    S = np.full((4, 4), NEG)
    S[0, 1:] = [0.5, 0.9, 0.9]
    # user 2 wins the tie with user 3: 3 + (1 - 2)
    assert predict(v, S, 0, 0, PredictorConfig(k=1)).value == 2.0


def test_batch_of_1000_equals_scalar_calls():
    rng = np.random.default_rng(5)
    recs = [(u, i, int(rng.integers(1, 6))) for u in range(40) for i in range(30) if rng.random() < 0.3]
    v = build_matrix(recs, 40, 30).user_view()
    S = similarity_matrix(v, Measure.COSINE)
    rows, cols = rng.integers(0, 40, 1000), rng.integers(0, 30, 1000)
    batch = predict_batch(v, S, rows, cols)
    for t in range(1000):
        assert batch[t] == predict(v, S, rows[t], cols[t])


@given(rating_triples(max_users=10, max_items=8), st.integers(1, 12), st.sampled_from([None, 1.0, 0.5]),
       st.sampled_from(list(Measure)))
def test_matches_oracle_and_stays_in_scale(data, k, step, measure):
    n_users, n_items, triples = data
    v = matrix_from(*data).user_view()
    S = similarity_matrix(v, measure)
    rows = oracles.rows_from_triples(triples, n_users)
    if not triples:
        return
    pairs = [(a, c) for a in range(n_users) for c in range(n_items)]
    got = predict_batch(v, S, [a for a, _ in pairs], [c for _, c in pairs], PredictorConfig(k=k, rating_step=step))
    assert ((got.values >= 1.0) & (got.values <= 5.0)).all()
    want = oracles.predict_many(rows, S.tolist(), pairs, k, step=step)
    assert np.allclose(got.values, want, rtol=0, atol=1e-12)
    again = predict_batch(v, S, [a for a, _ in pairs], [c for _, c in pairs], PredictorConfig(k=k, rating_step=step))
    assert np.array_equal(got.values, again.values)


@given(rating_triples(max_users=8, max_items=6), st.data())
def test_zero_similarity_neighbor_has_no_effect(data, draw):
    n_users, n_items, triples = data
    if not triples:
        return
    v = matrix_from(*data).user_view()
    S = similarity_matrix(v, Measure.COSINE)
    a = draw.draw(st.integers(0, n_users - 1))
    b = draw.draw(st.integers(0, n_users - 1))
    if a == b:
        return
    S2 = S.copy()
    S2[a, b] = S2[b, a] = 0.0
    S1 = S.copy()
    S1[a, b] = S1[b, a] = NEG
    assert np.array_equal(predict_batch(v, S1, [a] * n_items, range(n_items)).values,
                          predict_batch(v, S2, [a] * n_items, range(n_items)).values)


@given(rating_triples(max_users=8, max_items=6), st.floats(0.01, 1.0))
def test_equal_similarities_reduce_to_mean_offset(data, s):
    n_users, n_items, triples = data
    if not triples:
        return
    v = matrix_from(*data).user_view()
    S = np.full((n_users, n_users), s)
    np.fill_diagonal(S, NEG)
    means = v.row_means
    rows = oracles.rows_from_triples(triples, n_users)
    for a in range(n_users):
        if np.isnan(means[a]):
            continue
        for c in range(n_items):
            raters = [b for b in range(n_users) if b != a and c in rows[b]]
            if not raters:
                continue
            want = means[a] + sum(rows[b][c] - means[b] for b in raters) / len(raters)
            got = predict(v, S, a, c, PredictorConfig(k=n_users)).value
            assert got == pytest.approx(min(max(want, 1.0), 5.0), abs=1e-12)

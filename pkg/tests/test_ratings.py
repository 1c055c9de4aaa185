import math

import numpy as np
import pytest
from hypothesis import given

from conftest import matrix_from, rating_triples
from lmknn import RatingTable, build_matrix, corated_items, transpose_view
from lmknn.ratings import RatingError


def test_means():
    m = build_matrix([(0, 0, 3), (0, 1, 5), (1, 0, 1)], 2, 2)
    assert m.user_means.tolist() == [4.0, 1.0]
    assert m.item_means.tolist() == [2.0, 5.0]
    assert m.global_mean == 3.0
    assert m.n_ratings == 3


def test_empty_matrix():
    m = build_matrix([], 1, 1)
    assert m.n_ratings == 0
    assert math.isnan(m.user_means[0])


def test_trailing_entities_without_ratings():
    m = build_matrix([(0, 0, 2)], 3, 4)
    assert m.user_means[0] == 2.0 and np.isnan(m.user_means[1:]).all()
    assert np.isnan(m.item_means[1:]).all()


@pytest.mark.parametrize("record, index", [
    ([(0, 0, 3), (2, 0, 3)], 1),
    ([(0, 5, 3)], 0),
    ([(0, 0, 3), (0, 1, 3), (1, 1, 6)], 2),
    ([(0, 0, 0.5)], 0),
])
def test_invalid_records_report_index(record, index):
    with pytest.raises(RatingError) as exc:
        build_matrix(record, 2, 2)
    assert exc.value.index == index


def test_duplicates_last_wins():
    m = build_matrix([(0, 0, 1), (0, 1, 2), (0, 0, 4)], 1, 2)
    assert m.duplicates == 1
    assert m.user_view().row(0)[1].tolist() == [4.0, 2.0]


def test_corated_examples():
    m = build_matrix([(0, 0, 3), (0, 1, 5), (1, 1, 4), (1, 2, 2)], 2, 3)
    v = m.user_view()
    assert corated_items(v, 0, 1) == [(1, 5.0, 4.0)]
    assert corated_items(v, 0, 0) == [(0, 3.0, 3.0), (1, 5.0, 5.0)]
    m2 = build_matrix([(0, 0, 1), (1, 1, 1)], 2, 2)
    assert corated_items(m2.user_view(), 0, 1) == []


def test_item_view_is_transpose():
    m = build_matrix([(0, 0, 1), (0, 1, 2), (0, 2, 3), (1, 0, 4), (1, 1, 5)], 2, 3)
    iv = transpose_view(m)
    assert (iv.n_rows, iv.n_cols) == (3, 2)
    assert len(corated_items(iv, 0, 1)) == 2
    back = transpose_view(iv)
    uv = m.user_view()
    for r in range(2):
        assert [a.tolist() for a in back.row(r)] == [a.tolist() for a in uv.row(r)]


def test_row_out_of_range():
    with pytest.raises(IndexError):
        build_matrix([], 2, 2).user_view().row(2)


def test_rating_table_roundtrip():
    t = RatingTable.from_records([(0, 1, 3.0, 9), (1, 0, 2.0)])
    assert [tuple(r) for r in t] == [(0, 1, 3.0, 9), (1, 0, 2.0, 0)]


@given(rating_triples())
def test_corated_symmetric(data):
    m = matrix_from(*data)
    v = m.user_view()
    for a in range(v.n_rows):
        for b in range(v.n_rows):
            assert corated_items(v, a, b) == [(c, y, x) for c, x, y in corated_items(v, b, a)]


@given(rating_triples())
def test_counts_consistent(data):
    n_users, n_items, triples = data
    m = matrix_from(*data)
    assert m.user_view().row_counts().sum() == len(triples) == m.item_view().row_counts().sum()


@given(rating_triples())
def test_means_within_scale(data):
    m = matrix_from(*data)
    rated = ~np.isnan(m.user_means)
    assert (m.user_means[rated] >= 1.0).all() and (m.user_means[rated] <= 5.0).all()
    assert rated.sum() == len({u for u, _, _ in data[2]})

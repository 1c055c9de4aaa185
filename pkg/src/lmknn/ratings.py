"""Sparse rating matrix with user-major and item-major access."""

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Union

import numpy as np


class RatingError(ValueError):
    """A rating record violates the matrix declaration.

    ``index`` is the position of the offending record in the input sequence.
    """

    def __init__(self, message, index):
        super().__init__(f"record {index}: {message}")
        self.index = index


class Rating(NamedTuple):
    user: int
    item: int
    value: float
    timestamp: int = 0


@dataclass(frozen=True, eq=False)
class RatingTable:
    """Column-oriented list of rating records (dense 0-based ids)."""

    users: np.ndarray
    items: np.ndarray
    values: np.ndarray
    timestamps: np.ndarray

    def __post_init__(self):
        n = len(self.users)
        if not (len(self.items) == len(self.values) == len(self.timestamps) == n):
            raise ValueError("rating columns differ in length")

    @classmethod
    def from_records(cls, records: Iterable) -> "RatingTable":
        recs = [Rating(*r) for r in records]
        return cls(
            users=np.array([r.user for r in recs], dtype=np.int64),
            items=np.array([r.item for r in recs], dtype=np.int64),
            values=np.array([r.value for r in recs], dtype=np.float64),
            timestamps=np.array([r.timestamp for r in recs], dtype=np.int64),
        )

    def __len__(self):
        return len(self.users)

    def __iter__(self):
        for u, i, v, t in zip(self.users, self.items, self.values, self.timestamps):
            yield Rating(int(u), int(i), float(v), int(t))

    def subset(self, index) -> "RatingTable":
        return RatingTable(self.users[index], self.items[index], self.values[index], self.timestamps[index])


@dataclass(frozen=True)
class _Compressed:
    """One compressed-sparse direction: rows sorted by column id."""

    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray

    def row(self, r):
        lo, hi = self.indptr[r], self.indptr[r + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def lengths(self):
        return np.diff(self.indptr)


def _compress(major, minor, values, n_major):
    order = np.lexsort((minor, major))
    counts = np.bincount(major, minlength=n_major)
    indptr = np.zeros(n_major + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return _Compressed(indptr, np.ascontiguousarray(minor[order]), np.ascontiguousarray(values[order]))


def _means(comp):
    lengths = comp.lengths()
    owner = np.repeat(np.arange(len(lengths)), lengths)
    sums = np.bincount(owner, weights=comp.values, minlength=len(lengths))
    out = np.full(len(lengths), np.nan)
    has = lengths > 0
    out[has] = sums[has] / lengths[has]
    return out


@dataclass(frozen=True, eq=False)
class RatingMatrix:
    """Immutable |U| x |P| rating store.

    ``by_user`` and ``by_item`` hold the same ratings compressed in each
    direction.  Means of entities without ratings are NaN.
    """

    num_users: int
    num_items: int
    by_user: _Compressed
    by_item: _Compressed
    user_means: np.ndarray
    item_means: np.ndarray
    global_mean: float
    scale: tuple
    duplicates: int = 0

    @property
    def n_ratings(self):
        return len(self.by_user.values)

    @property
    def sparsity(self):
        """Percentage of filled cells (the convention used in data set tables)."""
        cells = self.num_users * self.num_items
        return 100.0 * self.n_ratings / cells if cells else 0.0

    def user_view(self) -> "EntityView":
        return EntityView("user", self)

    def item_view(self) -> "EntityView":
        return EntityView("item", self)

    def view(self, orientation) -> "EntityView":
        return EntityView(orientation, self)


def build_matrix(ratings: Union[RatingTable, Iterable], num_users, num_items, scale=(1.0, 5.0)) -> RatingMatrix:
    """Build a :class:`RatingMatrix`; later duplicates of a (user, item) pair win."""
    v_min, v_max = float(scale[0]), float(scale[1])
    if v_min > v_max:
        raise ValueError(f"invalid rating scale {scale!r}")
    if not isinstance(ratings, RatingTable):
        ratings = RatingTable.from_records(ratings)

    users, items, values = ratings.users, ratings.items, ratings.values
    bad = np.flatnonzero((users < 0) | (users >= num_users))
    if len(bad):
        raise RatingError(f"user id {users[bad[0]]} outside [0, {num_users})", int(bad[0]))
    bad = np.flatnonzero((items < 0) | (items >= num_items))
    if len(bad):
        raise RatingError(f"item id {items[bad[0]]} outside [0, {num_items})", int(bad[0]))
    bad = np.flatnonzero(~((values >= v_min) & (values <= v_max)))
    if len(bad):
        raise RatingError(f"rating {values[bad[0]]} outside scale [{v_min}, {v_max}]", int(bad[0]))

    # last write wins: keep the final occurrence of every (user, item) key
    key = users * np.int64(num_items) + items
    rev_unique = np.unique(key[::-1], return_index=True)[1]
    keep = np.sort(len(key) - 1 - rev_unique)
    duplicates = len(key) - len(keep)
    users, items, values = users[keep], items[keep], values[keep].astype(np.float64)

    by_user = _compress(users, items, values, num_users)
    by_item = _compress(items, users, values, num_items)
    user_means = _means(by_user)
    item_means = _means(by_item)
    global_mean = float(values.mean()) if len(values) else float("nan")
    return RatingMatrix(
        num_users=int(num_users),
        num_items=int(num_items),
        by_user=by_user,
        by_item=by_item,
        user_means=user_means,
        item_means=item_means,
        global_mean=global_mean,
        scale=(v_min, v_max),
        duplicates=int(duplicates),
    )


@dataclass(frozen=True, eq=False)
class EntityView:
    """The matrix seen from users (rows=users) or items (rows=items).

    The item view is the transpose; nothing is copied.
    """

    orientation: str
    matrix: RatingMatrix
    rows: _Compressed = field(init=False, repr=False)
    cols: _Compressed = field(init=False, repr=False)

    def __post_init__(self):
        if self.orientation not in ("user", "item"):
            raise ValueError(f"orientation must be 'user' or 'item', got {self.orientation!r}")
        m = self.matrix
        rows, cols = (m.by_user, m.by_item) if self.orientation == "user" else (m.by_item, m.by_user)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def n_rows(self):
        return self.matrix.num_users if self.orientation == "user" else self.matrix.num_items

    @property
    def n_cols(self):
        return self.matrix.num_items if self.orientation == "user" else self.matrix.num_users

    @property
    def row_means(self):
        return self.matrix.user_means if self.orientation == "user" else self.matrix.item_means

    @property
    def global_mean(self):
        return self.matrix.global_mean

    @property
    def scale(self):
        return self.matrix.scale

    def row_counts(self):
        return self.rows.lengths()

    def row(self, r):
        self._check(r)
        return self.rows.row(r)

    def transpose(self) -> "EntityView":
        return EntityView("item" if self.orientation == "user" else "user", self.matrix)

    def dense(self):
        """Dense rows x cols ratings (0 where missing) and a 0/1 mask."""
        out = np.zeros((self.n_rows, self.n_cols))
        mask = np.zeros((self.n_rows, self.n_cols))
        r = np.repeat(np.arange(self.n_rows), self.rows.lengths())
        out[r, self.rows.indices] = self.rows.values
        mask[r, self.rows.indices] = 1.0
        return out, mask

    def _check(self, r):
        if not 0 <= r < self.n_rows:
            raise IndexError(f"{self.orientation} id {r} outside [0, {self.n_rows})")


def transpose_view(matrix: Union[RatingMatrix, EntityView]) -> EntityView:
    """Item-based view of a matrix, or the transpose of an existing view."""
    if isinstance(matrix, EntityView):
        return matrix.transpose()
    return EntityView("item", matrix)


def corated_items(view: EntityView, a, b):
    """``[(col, r_a, r_b), ...]`` over the columns both rows rated, ascending by col."""
    ia, va = view.row(a)
    ib, vb = view.row(b)
    out = []
    p = q = 0
    while p < len(ia) and q < len(ib):
        if ia[p] == ib[q]:
            out.append((int(ia[p]), float(va[p]), float(vb[q])))
            p += 1
            q += 1
        elif ia[p] < ib[q]:
            p += 1
        else:
            q += 1
    return out

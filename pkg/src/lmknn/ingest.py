"""Rating file parsing, chronological cuts and seeded k-fold splits."""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ratings import RatingTable
from .rng import PCG32

_log = logging.getLogger(__name__)

FORMATS = {"ml-100k": "\t", "ml-1m": "::", "csv": ","}
DEFAULT_COLUMNS = ("user", "item", "rating", "timestamp")


class ParseError(ValueError):
    def __init__(self, path, line, message):
        loc = f"{path}:{line}" if line else str(path)
        super().__init__(f"{loc}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class DatasetSpec:
    path: str
    format: str = "ml-100k"
    sep: str = None
    has_header: bool = False
    columns: tuple = DEFAULT_COLUMNS
    scale: tuple = (1.0, 5.0)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {', '.join(FORMATS)}")
        if self.sep is None:
            object.__setattr__(self, "sep", FORMATS[self.format])
        elif self.format != "csv" and self.sep != FORMATS[self.format]:
            raise ValueError(f"format {self.format} implies separator {FORMATS[self.format]!r}, got {self.sep!r}")
        cols = tuple(c.strip().lower() for c in self.columns)
        missing = {"user", "item", "rating"} - set(cols)
        if missing:
            raise ValueError(f"column order lacks {sorted(missing)}")
        object.__setattr__(self, "columns", cols)


@dataclass(frozen=True, eq=False)
class ParsedRatings:
    """Ratings with dense ids plus the raw id of every dense index."""

    ratings: RatingTable
    user_ids: np.ndarray
    item_ids: np.ndarray
    n_lines: int
    scale: tuple = (1.0, 5.0)

    @property
    def num_users(self):
        return len(self.user_ids)

    @property
    def num_items(self):
        return len(self.item_ids)

    @property
    def sparsity(self):
        return 100.0 * len(self.ratings) / (self.num_users * self.num_items)


def _remap(raw):
    """Dense ids ordered by raw id (numerically when every id is an integer)."""
    try:
        keys = np.array([int(x) for x in raw], dtype=np.int64)
    except ValueError:
        keys = np.array(raw, dtype=object)
    uniq, dense = np.unique(keys, return_inverse=True)
    return uniq, dense.astype(np.int64)


def parse_ratings(spec: DatasetSpec) -> ParsedRatings:
    path = Path(spec.path)
    try:
        fh = open(path, encoding="utf-8", errors="replace")
    except OSError as exc:
        raise ParseError(path, 0, f"cannot read file: {exc.strerror}") from exc

    pos = {name: i for i, name in enumerate(spec.columns)}
    width = len(spec.columns)
    users, items, values, stamps = [], [], [], []
    n_lines = 0
    with fh:
        for lineno, line in enumerate(fh, 1):
            n_lines = lineno
            line = line.rstrip("\r\n")
            if lineno == 1 and spec.has_header:
                continue
            if not line.strip():
                continue
            fields = line.split(spec.sep)
            if len(fields) < width:
                raise ParseError(path, lineno, f"expected {width} fields separated by {spec.sep!r}, got {len(fields)}")
            try:
                value = float(fields[pos["rating"]])
            except ValueError:
                raise ParseError(path, lineno, f"non-numeric rating {fields[pos['rating']]!r}") from None
            ts = 0
            if "timestamp" in pos:
                try:
                    ts = int(float(fields[pos["timestamp"]]))
                except ValueError:
                    raise ParseError(path, lineno, f"non-numeric timestamp {fields[pos['timestamp']]!r}") from None
            users.append(fields[pos["user"]].strip())
            items.append(fields[pos["item"]].strip())
            values.append(value)
            stamps.append(ts)
    if not users:
        raise ParseError(path, 0, "file contains no ratings")

    user_ids, u = _remap(users)
    item_ids, i = _remap(items)
    table = RatingTable(u, i, np.array(values, dtype=np.float64), np.array(stamps, dtype=np.int64))
    _log.info("parsed %d ratings (%d users, %d items) from %s", len(table), len(user_ids), len(item_ids), path)
    return ParsedRatings(table, user_ids, item_ids, n_lines, tuple(spec.scale))


def write_csv(parsed: ParsedRatings, path, header=True):
    """Write raw-id ratings as ``user,item,rating,timestamp``."""
    r = parsed.ratings
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow(DEFAULT_COLUMNS)
        for u, i, v, t in zip(r.users, r.items, r.values, r.timestamps):
            w.writerow([parsed.user_ids[u], parsed.item_ids[i], repr(float(v)), int(t)])


def chronological_cut(ratings: RatingTable, m) -> RatingTable:
    """The ``m`` earliest ratings, in time order; equal timestamps keep file order."""
    if m > len(ratings):
        raise ValueError(f"cut of {m} ratings requested from {len(ratings)}")
    if m < 0:
        raise ValueError("cut size must be nonnegative")
    order = np.argsort(ratings.timestamps, kind="stable")[:m]
    return ratings.subset(order)


def compact(parsed: ParsedRatings, ratings: RatingTable = None) -> ParsedRatings:
    """Re-index users/items of ``ratings`` (default: all) densely."""
    ratings = parsed.ratings if ratings is None else ratings
    uu, u = np.unique(ratings.users, return_inverse=True)
    ii, i = np.unique(ratings.items, return_inverse=True)
    table = RatingTable(u.astype(np.int64), i.astype(np.int64), ratings.values, ratings.timestamps)
    return ParsedRatings(table, parsed.user_ids[uu], parsed.item_ids[ii], parsed.n_lines, parsed.scale)


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    fold_of: np.ndarray
    k_folds: int
    seed: int

    def test_index(self, fold):
        return np.flatnonzero(self.fold_of == fold)

    def train_index(self, fold):
        return np.flatnonzero(self.fold_of != fold)

    def sizes(self):
        return np.bincount(self.fold_of, minlength=self.k_folds)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["record_index", "fold"])
            w.writerows(enumerate(self.fold_of.tolist()))


def kfold_split(n_ratings, k_folds=10, seed=0) -> FoldAssignment:
    """Shuffle record indices with PCG32(seed, stream 0); deal folds round-robin.

    ``n_ratings`` may also be any sized rating container.
    """
    n = n_ratings if isinstance(n_ratings, (int, np.integer)) else len(n_ratings)
    if k_folds < 2:
        raise ValueError(f"k_folds must be >= 2, got {k_folds}")
    if n < k_folds:
        raise ValueError(f"{n} ratings cannot fill {k_folds} folds")
    perm = PCG32(seed, 0).shuffle(list(range(n)))
    fold_of = np.empty(n, dtype=np.int64)
    fold_of[np.array(perm, dtype=np.int64)] = np.arange(n) % k_folds
    return FoldAssignment(fold_of, k_folds, seed)


def load(spec: DatasetSpec, cut=None) -> ParsedRatings:
    """Parse a dataset, optionally keeping only its ``cut`` earliest ratings."""
    parsed = parse_ratings(spec)
    if cut is not None:
        parsed = compact(parsed, chronological_cut(parsed.ratings, cut))
    return parsed

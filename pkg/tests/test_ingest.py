import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lmknn import DatasetSpec, RatingTable, chronological_cut, kfold_split, load, parse_ratings
from lmknn.ingest import ParseError, write_csv


def _write(tmp_path, text, name="r.data"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_ml100k_line(tmp_path):
    p = _write(tmp_path, "196\t242\t3\t881250949\n186\t302\t3\t891717742\n")
    parsed = parse_ratings(DatasetSpec(p))
    r = list(parsed.ratings)[0]
    assert (parsed.user_ids[r.user], parsed.item_ids[r.item], r.value, r.timestamp) == (196, 242, 3.0, 881250949)
    # dense ids follow raw id order
    assert parsed.user_ids.tolist() == [186, 196]


def test_ml1m_line(tmp_path):
    p = _write(tmp_path, "1::1193::5::978300760\n")
    assert list(parse_ratings(DatasetSpec(p, format="ml-1m")).ratings)[0].value == 5.0


def test_csv_with_header_and_column_order(tmp_path):
    p = _write(tmp_path, "item,user,rating\na,x,4.5\nb,x,2\n")
    parsed = parse_ratings(DatasetSpec(p, format="csv", has_header=True, columns=("item", "user", "rating")))
    assert parsed.num_users == 1 and parsed.num_items == 2
    assert parsed.ratings.values.tolist() == [4.5, 2.0]


@pytest.mark.parametrize("text, line", [
    ("1\t2\t3\t4\n1\t2\n", 2),
    ("1\t2\t3\t4\n\n5\t6\tx\t7\n", 3),
    ("1\t2\t3\tlater\n", 1),
])
def test_malformed_lines(tmp_path, text, line):
    with pytest.raises(ParseError) as exc:
        parse_ratings(DatasetSpec(_write(tmp_path, text)))
    assert exc.value.line == line
    assert f":{line}:" in str(exc.value)


def test_empty_and_missing(tmp_path):
    with pytest.raises(ParseError, match="no ratings"):
        parse_ratings(DatasetSpec(_write(tmp_path, "")))
    with pytest.raises(ParseError, match="cannot read"):
        parse_ratings(DatasetSpec(tmp_path / "absent"))


def test_separator_conflict():
    with pytest.raises(ValueError):
        DatasetSpec("x", format="ml-1m", sep=",")


def _table(ts):
    n = len(ts)
    return RatingTable(np.arange(n), np.zeros(n, dtype=np.int64), np.ones(n), np.array(ts, dtype=np.int64))


def test_chronological_cut():
    assert chronological_cut(_table([5, 1, 3]), 2).timestamps.tolist() == [1, 3]
    assert chronological_cut(_table([5, 1, 3]), 3).timestamps.tolist() == [1, 3, 5]
    # ties keep file order
    assert chronological_cut(_table([2, 1, 2]), 3).users.tolist() == [1, 0, 2]
    with pytest.raises(ValueError):
        chronological_cut(_table([1]), 2)


def test_load_with_cut_compacts_ids(tmp_path):
    p = _write(tmp_path, "1\t1\t3\t30\n2\t2\t4\t10\n3\t3\t5\t20\n")
    d = load(DatasetSpec(p), cut=2)
    assert len(d.ratings) == 2
    assert d.user_ids.tolist() == [2, 3]


def test_kfold_balanced_and_deterministic():
    f = kfold_split(100, 10, seed=4)
    assert f.sizes().tolist() == [10] * 10
    assert len(f.train_index(3)) == 90
    assert np.array_equal(f.fold_of, kfold_split(100, 10, seed=4).fold_of)
    assert not np.array_equal(f.fold_of, kfold_split(100, 10, seed=5).fold_of)


def test_kfold_errors():
    with pytest.raises(ValueError):
        kfold_split(5, 10)
    with pytest.raises(ValueError):
        kfold_split(5, 1)


def test_fold_csv(tmp_path):
    kfold_split(4, 2, 0).to_csv(tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "record_index,fold" and len(lines) == 5


@given(st.integers(2, 400), st.integers(2, 12), st.integers(0, 2**32))
def test_folds_partition(n, k, seed):
    if n < k:
        return
    f = kfold_split(n, k, seed)
    tests = [set(f.test_index(i).tolist()) for i in range(k)]
    assert set().union(*tests) == set(range(n))
    assert sum(len(t) for t in tests) == n
    sizes = f.sizes()
    assert sizes.max() - sizes.min() <= 1


@given(st.lists(st.integers(0, 50), min_size=1, max_size=40), st.data())
def test_cut_prefix(ts, data):
    m = data.draw(st.integers(0, len(ts)))
    m2 = data.draw(st.integers(m, len(ts)))
    t = _table(ts)
    small, big = chronological_cut(t, m), chronological_cut(t, m2)
    assert small.users.tolist() == big.users.tolist()[:m]


_raw = st.lists(st.tuples(st.integers(1, 30), st.text("abcxyz", min_size=1, max_size=3),
                          st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.5, 5.0]), st.integers(0, 10**9)),
                min_size=1, max_size=30)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(_raw)
def test_csv_round_trip(tmp_path, records):
    src = tmp_path / "src.csv"
    src.write_text("".join(f"{u},{i},{v},{t}\n" for u, i, v, t in records))
    first = parse_ratings(DatasetSpec(src, format="csv"))
    out = tmp_path / "out.csv"
    write_csv(first, out)
    second = parse_ratings(DatasetSpec(out, format="csv", has_header=True))

    def multiset(p):
        r = p.ratings
        return sorted((str(p.user_ids[u]), str(p.item_ids[i]), v, t)
                      for u, i, v, t in zip(r.users, r.items, r.values, r.timestamps))

    assert multiset(first) == multiset(second)

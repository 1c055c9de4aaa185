from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmknn.rng import PCG32


def test_reference_vector():
    # first outputs of pcg32-demo with initstate=42, initseq=54
    rng = PCG32(42, 54)
    assert [rng.next_u32() for _ in range(6)] == [
        0xA15C02B7, 0x7B47F409, 0xBA1D3330, 0x83D2F293, 0xBFA4784B, 0xCBED606E,
    ]


def test_streams_differ():
    a, b = PCG32(7, 1), PCG32(7, 2)
    assert [a.next_u32() for _ in range(4)] != [b.next_u32() for _ in range(4)]


def test_bounded_rejects_bad_bound():
    with pytest.raises(ValueError):
        PCG32().bounded(0)


def test_bounded_roughly_uniform():
    rng = PCG32(3)
    counts = Counter(rng.bounded(5) for _ in range(20000))
    assert set(counts) == set(range(5))
    assert all(3600 < c < 4400 for c in counts.values())


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**63 - 1), st.integers(1, 60))
def test_shuffle_is_permutation_and_deterministic(seed, stream, n):
    a = PCG32(seed, stream).shuffle(list(range(n)))
    b = PCG32(seed, stream).shuffle(list(range(n)))
    assert a == b
    assert sorted(a) == list(range(n))


@given(st.integers(0, 2**32), st.integers(1, 30), st.data())
def test_sample_distinct(seed, size, data):
    n = data.draw(st.integers(0, size))
    got = PCG32(seed).sample(range(size), n)
    assert len(got) == n == len(set(got))


def test_uniform_in_unit_interval():
    rng = PCG32(11)
    xs = [rng.uniform() for _ in range(5000)]
    assert min(xs) >= 0.0 and max(xs) < 1.0


def test_weighted_sample_never_picks_zero_weight_first():
    for seed in range(200):
        assert PCG32(seed).weighted_sample([10, 11, 12], [0, 3, 0], 1) == [11]


def test_weighted_sample_exhausted_weights():
    with pytest.raises(ValueError, match="positive weight"):
        PCG32(0).weighted_sample([0, 1], [1, 0], 2)
    got = PCG32(0).weighted_sample([0, 1, 2], [1, 0, 0], 3, zero_weight="uniform")
    assert got[0] == 0 and sorted(got) == [0, 1, 2]


def test_weighted_sample_follows_weights():
    counts = Counter(PCG32(s).weighted_sample([0, 1], [1, 3], 1)[0] for s in range(4000))
    assert 0.7 < counts[1] / 4000 < 0.8

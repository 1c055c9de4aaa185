import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from lmknn import build_matrix  # noqa: E402

# every randomized property runs at least this many cases
PROPERTY_CASES = 1000

settings.register_profile("default", max_examples=PROPERTY_CASES, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parent.parent
ML100K = Path(os.environ.get("LMKNN_ML100K", ROOT / "data" / "ml-100k" / "u.data"))


@st.composite
def rating_triples(draw, max_users=8, max_items=8, values=st.integers(1, 5)):
    n_users = draw(st.integers(1, max_users))
    n_items = draw(st.integers(1, max_items))
    cells = draw(st.sets(st.tuples(st.integers(0, n_users - 1), st.integers(0, n_items - 1)),
                         max_size=n_users * n_items))
    triples = sorted((u, i, float(draw(values))) for u, i in cells)
    return n_users, n_items, triples


def matrix_from(n_users, n_items, triples):
    return build_matrix([(u, i, v) for u, i, v in triples], n_users, n_items)


def random_triples(rng, max_users=50, max_items=40, density=(0.1, 0.5)):
    n_users = int(rng.integers(2, max_users + 1))
    n_items = int(rng.integers(2, max_items + 1))
    p = rng.uniform(*density)
    mask = rng.random((n_users, n_items)) < p
    vals = rng.integers(1, 6, size=(n_users, n_items))
    triples = [(int(u), int(i), float(vals[u, i])) for u, i in zip(*np.nonzero(mask))]
    return n_users, n_items, triples


_REPORT_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record a one-line pass/fail verdict shown in the terminal summary."""
    lines = request.config.stash.setdefault(_REPORT_KEY, [])

    def record(number, ok, detail):
        lines.append((number, f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_REPORT_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ml100k_path():
    if not ML100K.exists():
        pytest.skip(f"MovieLens100k not found at {ML100K} (run scripts/fetch_movielens.py)")
    return ML100K

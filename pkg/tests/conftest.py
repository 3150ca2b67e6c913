import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

LABELS = [f"K{i:02d}" for i in range(20)]


@st.composite
def edge_rows(draw, max_countries=8, max_rows=25):
    """Random valid ``(source, target, weight)`` rows."""
    n = draw(st.integers(1, max_countries))
    labels = LABELS[:n]
    row = st.tuples(st.sampled_from(labels), st.sampled_from(labels), st.integers(1, 50))
    return draw(st.lists(row, min_size=1, max_size=max_rows))


def random_rows(rng, max_countries=20, max_rows=60):
    n = int(rng.integers(1, max_countries + 1))
    m = int(rng.integers(1, max_rows + 1))
    labels = LABELS[:n]
    return [
        (labels[rng.integers(n)], labels[rng.integers(n)], int(rng.integers(1, 30)))
        for _ in range(m)
    ]


def rows_to_text(rows):
    return "source,target,weight\n" + "".join(f"{a},{b},{w}\n" for a, b, w in rows)


def features_by_rows(rows):
    """Brute-force per-row feature oracle, independent of CollaborationGraph."""
    selfw, extw, partners = {}, {}, {}
    for a, b, w in rows:
        for c in (a, b):
            selfw.setdefault(c, 0)
            extw.setdefault(c, 0)
            partners.setdefault(c, set())
        if a == b:
            selfw[a] += w
        else:
            extw[a] += w
            extw[b] += w
            partners[a].add(b)
            partners[b].add(a)
    out = {}
    for c in selfw:
        total = selfw[c] + extw[c]
        out[c] = (selfw[c], extw[c], len(partners[c]), 100.0 * extw[c] / total)
    return out


def brute_force_wcss(X, k):
    """Minimum WCSS over every labelling of the points into <= k groups."""
    X = np.asarray(X, dtype=float)
    n = len(X)
    L = np.array(list(itertools.product(range(k), repeat=n)))
    total = np.zeros(len(L))
    sq = (X ** 2).sum(axis=1)
    for j in range(k):
        M = (L == j).astype(float)
        cnt = M.sum(axis=1)
        s = M @ X
        total += np.where(cnt > 0, M @ sq - (s ** 2).sum(axis=1) / np.maximum(cnt, 1), 0.0)
    return float(total.min())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

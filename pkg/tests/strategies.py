"""Hypothesis strategies for small categorical datasets."""
import numpy as np
from hypothesis import strategies as st

from khist.histogram import ClusterSummary


@st.composite
def code_matrices(draw, min_n=1, max_n=50, max_m=6, max_p=5):
    """(records, value_counts): an (n, m) code matrix and per-attribute domain sizes."""
    m = draw(st.integers(1, max_m))
    ps = draw(st.lists(st.integers(1, max_p), min_size=m, max_size=m))
    n = draw(st.integers(min_n, max_n))
    rows = draw(st.lists(st.tuples(*[st.integers(0, p - 1) for p in ps]), min_size=n, max_size=n))
    return np.array(rows, dtype=np.int64).reshape(n, m), ps


@st.composite
def member_sets(draw, **kw):
    """(members, probe, value_counts) with a non-empty member list."""
    records, ps = draw(code_matrices(**kw))
    probe = tuple(draw(st.integers(0, p - 1)) for p in ps)
    return records, probe, ps


def summary_of(records, value_counts):
    s = ClusterSummary.empty(value_counts)
    for row in records:
        s.add(row)
    return s


def random_codes(rng, n, m, max_p):
    """Seeded-RNG counterpart of ``code_matrices`` for fixed-size sweeps."""
    ps = rng.integers(1, max_p + 1, size=m)
    cols = [rng.integers(0, p, size=n) for p in ps]
    return np.stack(cols, axis=1), [int(p) for p in ps]

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from khist.dissimilarity import (avft_score, d1, d2, d3, d4, delta, match_count, phi, psi, psi_full,
                                 truncated_counts)
from khist.histogram import ClusterSummary

from strategies import member_sets, summary_of


def test_delta_and_d1():
    assert delta("a", "a") == 0 and delta("a", "b") == 1
    assert d1([0, 1, 2], [0, 2, 2]) == 1
    with pytest.raises(ValueError):
        d1([0], [0, 1])


@given(member_sets(max_n=10))
def test_d1_is_hamming(case):
    records, probe, _ = case
    for row in records:
        assert d1(row, probe) == int((np.asarray(row) != np.asarray(probe)).sum())
        assert d1(row, probe) == d1(probe, row)


@given(member_sets(max_n=5))
def test_d1_triangle(case):
    records, probe, _ = case
    for a in records:
        for b in records:
            assert d1(a, b) <= d1(a, probe) + d1(probe, b)


def test_worked_example():
    members = [(0, 0), (0, 1), (1, 1)]
    s = summary_of(members, [2, 2])
    y = (0, 1)
    # mismatches against each member: 1, 0, 1
    assert d2(members, y) == Fraction(2, 3)
    assert d3(s, y) == Fraction(2, 3)
    assert d4(s, y) == Fraction(4, 3)
    assert match_count(s, y) == 4
    assert d4(s, y, denominator=10) == Fraction(4, 10)


@given(member_sets())
def test_compression_soundness(case):
    records, probe, ps = case
    s = summary_of(records, ps)
    assert d2(records, probe) == d3(s, probe)
    assert d3(s, probe) + d4(s, probe) == len(ps)


@given(member_sets(max_n=1))
def test_singleton_match_score(case):
    records, probe, ps = case
    # a one-member summary is the record itself
    assert d4(summary_of(records, ps), probe) == len(ps) - d1(records[0], probe)


@given(member_sets())
def test_phi_psi_split_the_column(case):
    records, probe, ps = case
    s = summary_of(records, ps)
    for c, v in zip(s.counts, probe):
        assert psi(c, v) == psi_full(c, v)
        assert phi(c, v) + psi(c, v) == s.member_count


def test_empty_summary_rejected():
    s = ClusterSummary.empty([2])
    for f in (d3, d4):
        with pytest.raises(ValueError):
            f(s, [0])
    with pytest.raises(ValueError):
        avft_score(s, [0], 0)
    with pytest.raises(ValueError):
        d2([], [0])


def test_truncation_keeps_values_at_threshold():
    s = summary_of([[0]] * 3 + [[1]] * 1 + [[2]] * 2, [3])
    # relative frequencies 1/2, 1/6, 1/3
    assert truncated_counts(s, Fraction(1, 3))[0].tolist() == [3, 0, 2]
    assert truncated_counts(s, Fraction(1, 2))[0].tolist() == [3, 0, 0]
    assert truncated_counts(s, 0)[0].tolist() == [3, 1, 2]


def test_truncation_falls_back_to_the_mode():
    s = summary_of([[0], [1], [1], [0]], [2])
    assert truncated_counts(s, 1)[0].tolist() == [2, 0]  # tie -> lowest code


def test_truncation_threshold_range():
    s = summary_of([[0]], [1])
    with pytest.raises(ValueError):
        truncated_counts(s, Fraction(3, 2))


@given(member_sets())
def test_avft_zero_is_match_score(case):
    records, probe, ps = case
    s = summary_of(records, ps)
    assert avft_score(s, probe, 0) == d4(s, probe)


@given(member_sets(), st.fractions(0, 1))
def test_avft_never_exceeds_match_score(case, t):
    records, probe, ps = case
    s = summary_of(records, ps)
    assert avft_score(s, probe, t) <= d4(s, probe)

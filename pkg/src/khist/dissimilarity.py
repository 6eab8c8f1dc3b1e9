"""Record/record and record/summary scores with exact rational results.

``d1`` counts mismatching positions between two records. ``d2`` averages
``d1`` over a member set. ``d3`` is the same average read off a summary's
frequency tables. ``d4`` is the complementary match score (larger means
closer): ``d3 + d4 == m`` for any non-empty summary.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .histogram import ClusterSummary


def delta(a, b) -> int:
    return 0 if a == b else 1


def d1(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(delta(a, b) for a, b in zip(x, y))


def d2(members: Iterable[Sequence[int]], y: Sequence[int]) -> Fraction:
    total = 0
    n = 0
    for x in members:
        total += d1(x, y)
        n += 1
    if n == 0:
        raise ValueError("d2 over an empty member set")
    return Fraction(total, n)


def _require_members(summary: ClusterSummary, y):
    if summary.member_count < 1:
        raise ValueError("score against an empty cluster summary")
    if len(y) != summary.m:
        raise ValueError(f"record has {len(y)} values, summary has {summary.m} attributes")


def phi(counts: np.ndarray, y_j: int) -> int:
    """Total frequency of values other than ``y_j``."""
    return sum(int(f) * delta(v, y_j) for v, f in enumerate(counts))


def psi(counts: np.ndarray, y_j: int) -> int:
    """Frequency of ``y_j``: the matched-only form."""
    return int(counts[y_j]) if 0 <= y_j < counts.shape[0] else 0


def psi_full(counts: np.ndarray, y_j: int) -> int:
    """Same quantity as :func:`psi` written as the sum over every value."""
    return sum(int(f) * (1 - delta(v, y_j)) for v, f in enumerate(counts))


def d3(summary: ClusterSummary, y: Sequence[int], denominator: int | None = None) -> Fraction:
    _require_members(summary, y)
    num = sum(phi(c, int(v)) for c, v in zip(summary.counts, y))
    return Fraction(num, denominator or summary.member_count)


def match_count(summary: ClusterSummary, y: Sequence[int]) -> int:
    """Integer numerator of :func:`d4`."""
    return sum(psi(c, int(v)) for c, v in zip(summary.counts, y))


def d4(summary: ClusterSummary, y: Sequence[int], denominator: int | None = None) -> Fraction:
    """Match score of ``y`` against a summary.

    ``denominator`` overrides the member-count normalization (used for the
    dataset-size variant of the score).
    """
    _require_members(summary, y)
    return Fraction(match_count(summary, y), denominator or summary.member_count)


def truncated_counts(summary: ClusterSummary, threshold) -> list[np.ndarray]:
    """Frequency tables keeping only values with relative frequency >= threshold.

    An attribute left with nothing keeps its single most frequent value
    (smallest code on ties).
    """
    t = Fraction(threshold)
    if not 0 <= t <= 1:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    n = summary.member_count
    out = []
    for c in summary.counts:
        # f / n >= p / q  <=>  f * q >= p * n
        keep = np.array([f > 0 and f * t.denominator >= t.numerator * n for f in c.tolist()])
        if not keep.any():
            keep = np.zeros_like(keep)
            keep[int(np.argmax(c))] = True
        out.append(np.where(keep, c, 0))
    return out


def avft_score(summary: ClusterSummary, y: Sequence[int], threshold,
               denominator: int | None = None) -> Fraction:
    _require_members(summary, y)
    cut = truncated_counts(summary, threshold)
    num = sum(psi(c, int(v)) for c, v in zip(cut, y))
    return Fraction(num, denominator or summary.member_count)

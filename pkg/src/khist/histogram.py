"""Cluster summaries: one value-frequency table per attribute plus a member count.

Tables are dense arrays of length p_i indexed by value code. Zero cells
exist physically but are never reported as histogram entries.
"""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .errors import IntegrityError


class Histogram:
    """Read-only view of one attribute's frequency table."""

    __slots__ = ("attribute", "_counts")

    def __init__(self, attribute: int, counts: np.ndarray):
        self.attribute = attribute
        self._counts = counts

    def __getitem__(self, code: int) -> int:
        if 0 <= code < self._counts.shape[0]:
            return int(self._counts[code])
        return 0

    def items(self) -> Iterator[tuple[int, int]]:
        for code in np.flatnonzero(self._counts):
            yield int(code), int(self._counts[code])

    def as_dict(self) -> dict[int, int]:
        return dict(self.items())

    def total(self) -> int:
        return int(self._counts.sum())

    def __len__(self):
        return int(np.count_nonzero(self._counts))

    def __eq__(self, other):
        if isinstance(other, Histogram):
            return self.as_dict() == other.as_dict()
        if isinstance(other, dict):
            return self.as_dict() == other
        return NotImplemented

    def __repr__(self):
        return f"Histogram({self.attribute}, {self.as_dict()})"


class ClusterSummary:
    """Per-attribute frequency tables for the members of one cluster."""

    __slots__ = ("counts", "member_count")

    def __init__(self, counts: Sequence[np.ndarray], member_count: int = 0):
        self.counts = [np.asarray(c, dtype=np.int64) for c in counts]
        self.member_count = int(member_count)

    @classmethod
    def empty(cls, value_counts: Sequence[int]) -> "ClusterSummary":
        return cls([np.zeros(p, dtype=np.int64) for p in value_counts], 0)

    @property
    def m(self) -> int:
        return len(self.counts)

    @property
    def histograms(self) -> list[Histogram]:
        return [Histogram(j, c) for j, c in enumerate(self.counts)]

    def frequency(self, attr: int, code: int) -> int:
        c = self.counts[attr]
        return int(c[code]) if 0 <= code < c.shape[0] else 0

    def _check_len(self, record):
        if len(record) != len(self.counts):
            raise ValueError(f"record has {len(record)} values, summary has {len(self.counts)} attributes")

    def add(self, record: Sequence[int]) -> None:
        self._check_len(record)
        for j, v in enumerate(record):
            self.counts[j][v] += 1
        self.member_count += 1

    def remove(self, record: Sequence[int]) -> None:
        self._check_len(record)
        if self.member_count < 1:
            raise IntegrityError("remove from an empty cluster summary")
        for j, v in enumerate(record):
            if self.frequency(j, v) <= 0:
                raise IntegrityError(f"attribute {j}: value {v} has no frequency to remove")
        for j, v in enumerate(record):
            self.counts[j][v] -= 1
        self.member_count -= 1

    def mode(self) -> np.ndarray:
        """Most frequent code per attribute, ties to the smallest code."""
        if self.member_count < 1:
            raise ValueError("mode of an empty cluster summary")
        # np.argmax returns the first maximal index
        return np.array([int(np.argmax(c)) for c in self.counts], dtype=np.int64)

    def copy(self) -> "ClusterSummary":
        return ClusterSummary([c.copy() for c in self.counts], self.member_count)

    def check(self) -> None:
        """Assert frequency conservation; raises IntegrityError on violation."""
        for j, c in enumerate(self.counts):
            if (c < 0).any():
                raise IntegrityError(f"attribute {j}: negative frequency")
            if int(c.sum()) != self.member_count:
                raise IntegrityError(
                    f"attribute {j}: frequencies sum to {int(c.sum())}, member_count={self.member_count}")

    def __eq__(self, other):
        if not isinstance(other, ClusterSummary):
            return NotImplemented
        if self.member_count != other.member_count or self.m != other.m:
            return False
        return all(a.as_dict() == b.as_dict() for a, b in zip(self.histograms, other.histograms))

    def __repr__(self):
        hs = ", ".join(str(h.as_dict()) for h in self.histograms)
        return f"ClusterSummary(count={self.member_count}, [{hs}])"


def add_object(summary: ClusterSummary, record: Sequence[int]) -> ClusterSummary:
    summary.add(record)
    return summary


def remove_object(summary: ClusterSummary, record: Sequence[int]) -> ClusterSummary:
    summary.remove(record)
    return summary


def mode_of(summary: ClusterSummary) -> np.ndarray:
    return summary.mode()


def describe(summary: ClusterSummary, schema=None, title: str = "") -> str:
    """Human-readable table: value, frequency, relative frequency per attribute.

    Values within an attribute are listed by descending frequency, then code.
    """
    lines = []
    if title:
        lines.append(title)
    n = summary.member_count
    lines.append(f"  members: {n}")
    for j, h in enumerate(summary.histograms):
        name = schema.names[j] if schema is not None else f"A{j + 1}"
        lines.append(f"  {name}:")
        for code, f in sorted(h.items(), key=lambda t: (-t[1], t[0])):
            label = schema.decode(j, code) if schema is not None else str(code)
            rel = f / n if n else 0.0
            lines.append(f"    {label:<12} {f:>7d} {rel:8.4f}")
    return "\n".join(lines)

"""Loading and interning of delimiter-separated categorical data.

Every attribute value is mapped to a dense integer code in first-occurrence
order, so downstream kernels work on a plain ``(n, m)`` integer matrix.
The missing-value token is kept as an ordinary category.
"""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence, Union

import numpy as np

from .errors import DataError, ParseError
from .histogram import ClusterSummary

LabelColumn = Union[str, int]


@dataclass(frozen=True)
class LoadOptions:
    delimiter: str = ","
    label_column: LabelColumn = "none"  # "none" | "first" | "last" | column index
    missing_token: str = "?"
    header: bool = False

    def label_index(self, width: int) -> int | None:
        lc = self.label_column
        if lc in (None, "none"):
            return None
        if lc == "first":
            return 0
        if lc == "last":
            return width - 1
        try:
            idx = int(lc)
        except (TypeError, ValueError):
            raise DataError(f"invalid label column {lc!r}") from None
        if not 0 <= idx < width:
            raise DataError(f"label column {idx} out of range for {width} fields")
        return idx


# Both UCI files carry the class label in the first field, no header.
UCI_VOTING = LoadOptions(label_column="first")
UCI_MUSHROOM = LoadOptions(label_column="first")


class AttributeSchema:
    """Per-attribute bijection between raw string values and dense codes."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self._values: list[list[str]] = [[] for _ in self.names]
        self._index: list[dict[str, int]] = [{} for _ in self.names]

    @property
    def attribute_count(self) -> int:
        return len(self.names)

    @property
    def value_counts(self) -> tuple[int, ...]:
        """Distinct value count p_i per attribute."""
        return tuple(len(v) for v in self._values)

    def values(self, attr: int) -> tuple[str, ...]:
        return tuple(self._values[attr])

    def encode(self, attr: int, value: str) -> int:
        return self._index[attr][value]

    def decode(self, attr: int, code: int) -> str:
        return self._values[attr][code]

    def _intern(self, attr: int, value: str) -> int:
        index = self._index[attr]
        code = index.get(value)
        if code is None:
            code = len(self._values[attr])
            index[value] = code
            self._values[attr].append(value)
        return code

    def __repr__(self):
        return f"AttributeSchema(m={self.attribute_count}, p={self.value_counts})"


@dataclass(frozen=True)
class CategoricalDataset:
    schema: AttributeSchema
    records: np.ndarray  # (n, m) int32, read-only, file order
    labels: np.ndarray | None = None  # (n,) int32 class codes
    label_values: tuple[str, ...] = ()
    missing_token: str = "?"
    name: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return self.records.shape[0]

    @property
    def m(self) -> int:
        return self.records.shape[1]

    @property
    def record_count(self) -> int:
        return self.n

    def class_sizes(self) -> dict[str, int]:
        if self.labels is None:
            return {}
        counts = np.bincount(self.labels, minlength=len(self.label_values))
        return {v: int(c) for v, c in zip(self.label_values, counts)}

    def distinct_count(self) -> int:
        return len(np.unique(self.records, axis=0)) if self.n else 0

    def decode_rows(self) -> list[list[str]]:
        decode = self.schema.decode
        return [[decode(j, int(c)) for j, c in enumerate(row)] for row in self.records]

    def to_text(self, delimiter: str = ",") -> str:
        """Re-serialize attributes (and labels, first) in source order."""
        lines = []
        for i, row in enumerate(self.decode_rows()):
            if self.labels is not None:
                row = [self.label_values[self.labels[i]]] + row
            lines.append(delimiter.join(row))
        return "\n".join(lines) + ("\n" if lines else "")


def _read_rows(text: str, delimiter: str) -> list[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = []
    for row in reader:
        if not row or all(not f.strip() for f in row):
            continue
        rows.append((reader.line_num, [f.strip() for f in row]))
    return rows


def load_csv(source: Union[BinaryIO, bytes, str, os.PathLike],
             options: LoadOptions = LoadOptions(), name: str = "") -> CategoricalDataset:
    """Load a categorical dataset from a byte stream, raw bytes or a file path."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
        name = name or os.path.basename(os.fspath(source))
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    text = data.decode("utf-8")
    rows = _read_rows(text, options.delimiter)
    if options.header and rows:
        _, header = rows[0]
        rows = rows[1:]
    else:
        header = None
    if not rows:
        raise DataError("empty input: no data rows")

    width = len(rows[0][1])
    for line, row in rows:
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", line=line)
    if header is not None and len(header) != width:
        raise ParseError(f"header has {len(header)} fields, rows have {width}", line=1)

    label_idx = options.label_index(width)
    attr_cols = [c for c in range(width) if c != label_idx]
    if not attr_cols:
        raise DataError("no attribute columns left after removing the label column")
    if header is not None:
        names = [header[c] for c in attr_cols]
    else:
        names = [f"A{i + 1}" for i in range(len(attr_cols))]

    schema = AttributeSchema(names)
    records = np.empty((len(rows), len(attr_cols)), dtype=np.int32)
    label_codes = np.empty(len(rows), dtype=np.int32) if label_idx is not None else None
    label_index: dict[str, int] = {}
    for i, (_, row) in enumerate(rows):
        for j, c in enumerate(attr_cols):
            records[i, j] = schema._intern(j, row[c])
        if label_codes is not None:
            label_codes[i] = label_index.setdefault(row[label_idx], len(label_index))
    records.flags.writeable = False
    if label_codes is not None:
        label_codes.flags.writeable = False
    return CategoricalDataset(schema=schema, records=records, labels=label_codes,
                              label_values=tuple(label_index), missing_token=options.missing_token,
                              name=name)


def from_rows(rows: Iterable[Sequence[str]], labels: Sequence[str] | None = None,
              name: str = "") -> CategoricalDataset:
    """Build a dataset from in-memory string rows (tests, small experiments)."""
    rows = [list(r) for r in rows]
    if labels is not None:
        if len(labels) != len(rows):
            raise DataError("labels must have one entry per row")
        rows = [[lab] + r for lab, r in zip(labels, rows)]
        opts = LoadOptions(label_column="first")
    else:
        opts = LoadOptions()
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return load_csv(buf.getvalue().encode(), opts, name=name)


def from_codes(records, labels=None, name: str = "") -> CategoricalDataset:
    """Wrap an integer code matrix; codes are re-interned in first-occurrence order."""
    arr = np.asarray(records)
    rows = [[str(v) for v in row] for row in arr]
    labs = None if labels is None else [str(v) for v in labels]
    return from_rows(rows, labs, name=name)


def build_histogram(dataset: CategoricalDataset, member_indices: Iterable[int]) -> ClusterSummary:
    """Frequency tables of every attribute over the given members."""
    idx = np.fromiter((int(i) for i in member_indices), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= dataset.n):
        raise IndexError(f"member index out of range for n={dataset.n}")
    sub = dataset.records[idx]
    counts = [np.bincount(sub[:, j], minlength=p).astype(np.int64)
              for j, p in enumerate(dataset.schema.value_counts)]
    return ClusterSummary(counts, int(idx.size))

"""Label-based evaluation of a clustering: accuracy, error and purity."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DataError


def contingency(assignments, labels, k: int | None = None, n_classes: int | None = None) -> np.ndarray:
    """(k, classes) count matrix of cluster membership by class."""
    if labels is None:
        raise DataError("class labels are required for evaluation")
    a = np.asarray(assignments, dtype=np.int64)
    y = np.asarray(labels, dtype=np.int64)
    if a.shape != y.shape:
        raise DataError(f"{a.size} assignments but {y.size} labels")
    k = int(a.max()) + 1 if k is None else k
    n_classes = int(y.max()) + 1 if n_classes is None else n_classes
    table = np.zeros((k, n_classes), dtype=np.int64)
    np.add.at(table, (a, y), 1)
    return table


def _assignments(model_or_assignments):
    a = getattr(model_or_assignments, "assignments", model_or_assignments)
    k = getattr(model_or_assignments, "k", None)
    return a, k


def clustering_accuracy(model, labels) -> Fraction:
    """Sum over clusters of the dominant-class count, divided by n."""
    a, k = _assignments(model)
    table = contingency(a, labels, k)
    return Fraction(int(table.max(axis=1).sum()), int(table.sum()))


def clustering_error(model, labels) -> Fraction:
    return 1 - clustering_accuracy(model, labels)


def pure_clusters(model, labels) -> int:
    a, k = _assignments(model)
    table = contingency(a, labels, k)
    return int(((table > 0).sum(axis=1) == 1).sum())


@dataclass(frozen=True)
class ClusterComposition:
    size: int
    dominant_class: int | None  # smallest class code among the maxima; None if empty
    dominant_count: int


def composition(model, labels) -> list[ClusterComposition]:
    a, k = _assignments(model)
    table = contingency(a, labels, k)
    out = []
    for row in table:
        size = int(row.sum())
        if size == 0:
            out.append(ClusterComposition(0, None, 0))
        else:
            top = int(np.argmax(row))
            out.append(ClusterComposition(size, top, int(row[top])))
    return out


CSV_COLUMNS = ("dataset", "algorithm", "k", "n", "accuracy", "error", "correct",
               "pure_clusters", "iterations", "total_swaps", "converged", "final_cost")


@dataclass
class RunReport:
    dataset: str
    algorithm: str
    k: int
    n: int
    accuracy: Fraction | None  # None when the data carries no labels
    pure_clusters: int | None
    iterations: int
    total_swaps: int
    converged: bool
    per_cluster: list[ClusterComposition] = field(default_factory=list)
    cost_trace: list[Fraction] = field(default_factory=list)
    swaps_per_iteration: list[int] = field(default_factory=list)
    seeds: tuple[int, ...] = ()

    @property
    def error(self) -> Fraction | None:
        return None if self.accuracy is None else 1 - self.accuracy

    @property
    def correct(self) -> int | None:
        return None if self.accuracy is None else int(self.accuracy * self.n)

    @classmethod
    def from_run(cls, dataset, model, stats, name: str | None = None) -> "RunReport":
        labels = dataset.labels
        labelled = labels is not None
        return cls(
            dataset=name if name is not None else dataset.name,
            algorithm=model.algorithm.tag,
            k=model.k,
            n=dataset.n,
            accuracy=clustering_accuracy(model, labels) if labelled else None,
            pure_clusters=pure_clusters(model, labels) if labelled else None,
            iterations=stats.iterations,
            total_swaps=stats.total_swaps,
            converged=stats.converged,
            per_cluster=composition(model, labels) if labelled else
            [ClusterComposition(int(sz), None, 0) for sz in model.sizes()],
            cost_trace=list(stats.cost_trace),
            swaps_per_iteration=list(stats.swaps_per_iteration),
            seeds=model.seeds,
        )

    def csv_row(self) -> list[str]:
        final = self.cost_trace[-1] if self.cost_trace else Fraction(0)
        na = self.accuracy is None
        return [self.dataset, self.algorithm, str(self.k), str(self.n),
                "" if na else f"{float(self.accuracy):.6f}", "" if na else f"{float(self.error):.6f}",
                "" if na else str(self.correct), "" if na else str(self.pure_clusters),
                str(self.iterations), str(self.total_swaps),
                "true" if self.converged else "false", f"{float(final):.6f}"]

    def format_human(self, label_values: Sequence[str] = ()) -> str:
        lines = [
            f"dataset:        {self.dataset}",
            f"algorithm:      {self.algorithm}",
            f"k:              {self.k}",
            f"n:              {self.n}",
        ]
        if self.accuracy is None:
            lines.append("accuracy r:     n/a (no labels)")
        else:
            lines += [f"accuracy r:     {float(self.accuracy):.6f} ({self.correct}/{self.n})",
                      f"error e:        {float(self.error):.6f}",
                      f"pure clusters:  {self.pure_clusters}"]
        lines += [
            f"iterations:     {self.iterations}",
            f"swaps:          {self.total_swaps} {self.swaps_per_iteration}",
            f"converged:      {'yes' if self.converged else 'no'}",
        ]
        if self.cost_trace:
            lines.append(f"final cost:     {float(self.cost_trace[-1]):.6f}")
        lines.append("clusters (size, dominant class, dominant count):")
        for c, comp in enumerate(self.per_cluster):
            if comp.dominant_class is None:
                cls_name = "-"
            elif label_values:
                cls_name = label_values[comp.dominant_class]
            else:
                cls_name = str(comp.dominant_class)
            lines.append(f"  {c:3d} {comp.size:7d} {cls_name:>12} {comp.dominant_count:7d}")
        return "\n".join(lines)


def reports_to_csv(reports: Sequence[RunReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()

"""Sweeps over (algorithm, k) cells with shared seeding, ranking tables and charts."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .clustering import Algorithm, RunConfig, run
from .dataset import CategoricalDataset, LoadOptions, load_csv
from .errors import DataError
from .metrics import RunReport, reports_to_csv

PRESETS = ("voting", "mushroom", "mushroom-complete")
QUANTITIES = {
    "error": lambda r: f"{float(r.error):.6f}",
    "iterations": lambda r: str(r.iterations),
    "swaps": lambda r: str(r.total_swaps),
    "pure_clusters": lambda r: str(r.pure_clusters),
}
_YLABELS = {"error": "clustering error", "iterations": "number of iterations",
            "swaps": "objects changed clusters", "pure_clusters": "pure clusters"}


def default_data_dir() -> Path:
    env = os.environ.get("KHIST_DATA")
    if env:
        return Path(env)
    repo = Path(__file__).resolve().parents[2] / "data"
    return repo if repo.is_dir() else Path("data")


@dataclass
class SweepSpec:
    dataset: str
    load: LoadOptions = LoadOptions(label_column="first")
    algorithms: tuple[str, ...] = ("khist", "kmodes")
    k_start: int = 2
    k_end: int = 2
    k_step: int = 1
    output_dir: str | None = None
    name: str = ""
    max_iterations: int = 100
    denominator: str = "cluster"

    def __post_init__(self):
        if self.k_step < 1 or self.k_start < 1 or self.k_end < self.k_start:
            raise ValueError(f"empty or invalid k range {self.k_start}..{self.k_end} step {self.k_step}")
        self.algorithms = tuple(Algorithm.parse(a).tag for a in self.algorithms)
        if not self.algorithms:
            raise ValueError("no algorithms given")

    @property
    def ks(self) -> list[int]:
        return list(range(self.k_start, self.k_end + 1, self.k_step))


def load_preset(name: str, data_dir: str | os.PathLike | None = None) -> SweepSpec:
    try:
        text = resources.files("khist.presets").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    raw = json.loads(text)
    root = Path(data_dir) if data_dir is not None else default_data_dir()
    kr = raw["k"]
    return SweepSpec(dataset=str(root / raw["dataset"]), load=LoadOptions(**raw["load"]),
                     algorithms=tuple(raw["algorithms"]), k_start=kr["start"], k_end=kr["end"],
                     k_step=kr.get("step", 1), name=raw["name"])


@dataclass
class RankingTable:
    """Per-k competition ranks by error; equal errors share the better rank."""
    algorithms: tuple[str, ...]
    ks: tuple[int, ...]
    ranks: dict[tuple[str, int], int]

    @classmethod
    def from_reports(cls, reports: Sequence[RunReport]) -> "RankingTable":
        algos = tuple(dict.fromkeys(r.algorithm for r in reports))
        ks = tuple(sorted({r.k for r in reports}))
        err = {(r.algorithm, r.k): r.error for r in reports}
        ranks = {}
        for k in ks:
            present = [a for a in algos if (a, k) in err]
            for a in present:
                ranks[(a, k)] = 1 + sum(err[(b, k)] < err[(a, k)] for b in present)
        return cls(algos, ks, ranks)

    def totals(self) -> dict[str, list[int]]:
        width = len(self.algorithms)
        out = {}
        for a in self.algorithms:
            row = [0] * width
            for k in self.ks:
                if (a, k) in self.ranks:
                    row[self.ranks[(a, k)] - 1] += 1
            out[a] = row
        return out

    def winners(self) -> dict[int, list[str]]:
        return {k: [a for a in self.algorithms if self.ranks.get((a, k)) == 1] for k in self.ks}

    def format_text(self) -> str:
        width = len(self.algorithms)
        head = "Ranking\t" + "\t".join(str(i + 1) for i in range(width))
        lines = [head]
        for a, row in self.totals().items():
            lines.append(a + "\t" + "\t".join(str(v) for v in row))
        lines.append(f"({len(self.ks)} k values: {self.ks[0]}..{self.ks[-1]})" if self.ks else "(no k values)")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k"] + [f"rank_{a}" for a in self.algorithms])
        for k in self.ks:
            w.writerow([k] + [self.ranks.get((a, k), "") for a in self.algorithms])
        return buf.getvalue()


@dataclass
class SweepResult:
    spec: SweepSpec
    reports: list[RunReport]
    ranking: RankingTable
    seeds: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def report(self, algorithm: str, k: int) -> RunReport:
        tag = Algorithm.parse(algorithm).tag
        for r in self.reports:
            if r.algorithm == tag and r.k == k:
                return r
        raise KeyError((algorithm, k))


class SweepError(RuntimeError):
    def __init__(self, cell, completed, cause):
        self.cell = cell
        self.completed = completed
        super().__init__(f"sweep cell {cell} failed after {len(completed)} completed cells: {cause}")


def _run_cell(dataset: CategoricalDataset, algorithm: str, k: int, config: RunConfig, name: str):
    model, stats = run(dataset, k, Algorithm.parse(algorithm), config)
    return RunReport.from_run(dataset, model, stats, name=name)


def run_sweep(spec: SweepSpec, dataset: CategoricalDataset | None = None, workers: int = 1) -> SweepResult:
    """Run every (algorithm, k) cell; cells for one k share the same seeds."""
    if dataset is None:
        dataset = load_csv(spec.dataset, spec.load)
    if dataset.labels is None:
        raise DataError("sweeps rank algorithms by error and need class labels")
    name = spec.name or dataset.name
    config = RunConfig(max_iterations=spec.max_iterations, denominator=spec.denominator)
    cells = [(a, k) for k in spec.ks for a in spec.algorithms]
    reports: list[RunReport] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(_run_cell, dataset, a, k, config, name) for a, k in cells]
            for cell, fut in zip(cells, futures):
                try:
                    reports.append(fut.result())
                except Exception as exc:
                    raise SweepError(cell, [(r.algorithm, r.k) for r in reports], exc) from exc
    else:
        for cell in cells:
            try:
                reports.append(_run_cell(dataset, cell[0], cell[1], config, name))
            except Exception as exc:
                raise SweepError(cell, [(r.algorithm, r.k) for r in reports], exc) from exc

    seeds: dict[int, tuple[int, ...]] = {}
    for r in reports:
        if seeds.setdefault(r.k, r.seeds) != r.seeds:
            raise AssertionError(f"k={r.k}: algorithms were seeded differently")
    return SweepResult(spec, reports, RankingTable.from_reports(reports), seeds)


def chart_csv(reports: Iterable[RunReport], quantity: str) -> str:
    fmt = QUANTITIES[quantity]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "algorithm", "value"])
    for r in reports:
        w.writerow([r.k, r.algorithm, fmt(r)])
    return buf.getvalue()


def emit_plots(reports: Sequence[RunReport], output_dir, title: str = "") -> list[Path]:
    """Write one SVG line chart and its CSV per measured quantity."""
    if not reports:
        raise ValueError("no reports to plot")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    algos = list(dict.fromkeys(r.algorithm for r in reports))
    with matplotlib.rc_context({"svg.hashsalt": "khist", "svg.fonttype": "none"}):
        for q, fmt in QUANTITIES.items():
            csv_path = out / f"{q}.csv"
            csv_path.write_text(chart_csv(reports, q))
            fig, ax = plt.subplots(figsize=(6, 4))
            for a in algos:
                pts = sorted((r.k, float(fmt(r))) for r in reports if r.algorithm == a)
                ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=a)
            ax.set_xlabel("number of clusters")
            ax.set_ylabel(_YLABELS[q])
            if title:
                ax.set_title(title)
            ax.legend()
            ax.grid(True, alpha=0.3)
            svg_path = out / f"{q}.svg"
            fig.savefig(svg_path, format="svg", metadata={"Date": None})
            plt.close(fig)
            written += [svg_path, csv_path]
    return written


def write_sweep(result: SweepResult, output_dir, plots: bool = True) -> list[Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [out / "reports.csv", out / "ranking.csv", out / "ranking.txt"]
    files[0].write_text(reports_to_csv(result.reports))
    files[1].write_text(result.ranking.to_csv())
    files[2].write_text(result.ranking.format_text() + "\n")
    if plots:
        files += emit_plots(result.reports, out, title=result.spec.name)
    return files


def with_output(spec: SweepSpec, output_dir) -> SweepSpec:
    return replace(spec, output_dir=str(output_dir))

"""k-histograms, k-modes and the frequency-threshold family between them.

All three share one loop:

1. seed k singleton clusters from the first k distinct records;
2. allocate the remaining objects in file order to the best-scoring
   cluster, updating that cluster right away;
3. sweep all objects in file order, moving an object when another cluster
   scores strictly better than its own (its own summary still counts it);
4. stop after a sweep with no moves, or at ``max_iterations`` sweeps.

A move that would empty its source cluster is vetoed. Ties go to the
lowest cluster index. Two engines implement the loop: ``"fast"`` (compiled,
integer state) and ``"reference"`` (``ClusterSummary`` objects and the
exact scores from :mod:`khist.dissimilarity`). They must agree
trace-for-trace.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import _kernels
from .dataset import CategoricalDataset, build_histogram
from .dissimilarity import avft_score, d1, d4
from .errors import IntegrityError, SeedError
from .histogram import ClusterSummary

MAX_THRESHOLD_DENOMINATOR = 10**6

_ALIASES = {"khist": "khist", "khistograms": "khist", "k-histograms": "khist",
            "kmodes": "kmodes", "k-modes": "kmodes", "avft": "avft"}


@dataclass(frozen=True)
class Algorithm:
    name: str
    threshold: Fraction | None = None

    def __post_init__(self):
        if self.name not in ("khist", "kmodes", "avft"):
            raise ValueError(f"unknown algorithm {self.name!r}")
        if self.name == "avft":
            if self.threshold is None:
                raise ValueError("avft needs a threshold")
            t = Fraction(self.threshold)
            if not 0 <= t <= 1:
                raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")
            if t.denominator > MAX_THRESHOLD_DENOMINATOR:
                # the compiled engine cross-multiplies in 64-bit integers
                raise ValueError(f"threshold denominator exceeds {MAX_THRESHOLD_DENOMINATOR}: {t}")
            object.__setattr__(self, "threshold", t)

    @property
    def tag(self) -> str:
        if self.name == "avft":
            return f"avft({_fmt_fraction(self.threshold)})"
        return self.name

    @classmethod
    def parse(cls, text: str, threshold=None) -> "Algorithm":
        """Accepts ``khist``, ``kmodes``, ``avft`` (with ``threshold``),
        ``avft:0.25`` or ``avft(1/4)``."""
        s = text.strip().lower()
        m = re.fullmatch(r"avft\s*[:(=]\s*([0-9./]+)\s*\)?", s)
        if m:
            return cls("avft", Fraction(m.group(1)))
        if s not in _ALIASES:
            raise ValueError(f"unknown algorithm {text!r}")
        name = _ALIASES[s]
        if name == "avft":
            if threshold is None:
                raise ValueError("avft needs a threshold")
            return cls("avft", Fraction(str(threshold)))
        return cls(name)

    def __str__(self):
        return self.tag


KHIST = Algorithm("khist")
KMODES = Algorithm("kmodes")


def _fmt_fraction(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    # terminating decimals print as decimals, anything else as p/q
    d = f.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        return format(float(f), "g")
    return f"{f.numerator}/{f.denominator}"


@dataclass
class RunConfig:
    max_iterations: int = 100
    denominator: str = "cluster"  # "cluster" | "dataset"
    trace: bool = False
    engine: str = "fast"  # "fast" | "reference"
    validate: bool = False  # brute-force summary check after every sweep

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.denominator not in ("cluster", "dataset"):
            raise ValueError(f"denominator must be 'cluster' or 'dataset', got {self.denominator!r}")
        if self.engine not in ("fast", "reference"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass(frozen=True)
class Move:
    iteration: int
    obj: int
    src: int
    dst: int
    src_score: Fraction
    dst_score: Fraction

    def format(self) -> str:
        return (f"move iter={self.iteration} obj={self.obj} from={self.src} to={self.dst} "
                f"src={self.src_score} dst={self.dst_score}")


@dataclass
class ConvergenceStats:
    iterations: int = 0
    swaps_per_iteration: list[int] = field(default_factory=list)
    vetoes_per_iteration: list[int] = field(default_factory=list)
    cost_trace: list[Fraction] = field(default_factory=list)
    converged: bool = False
    moves: list[Move] = field(default_factory=list)
    initial_assignments: np.ndarray | None = None  # after the allocation pass

    @property
    def total_swaps(self) -> int:
        return sum(self.swaps_per_iteration)


@dataclass
class ClusterModel:
    assignments: np.ndarray
    summaries: list[ClusterSummary]
    k: int
    algorithm: Algorithm
    seeds: tuple[int, ...]
    denominator: str = "cluster"
    modes: np.ndarray | None = None  # (k, m), k-modes only

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == c)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def check(self, dataset: CategoricalDataset) -> None:
        """Raise IntegrityError unless every summary matches its members."""
        if self.assignments.shape != (dataset.n,):
            raise IntegrityError("assignment vector length differs from n")
        if self.assignments.min(initial=0) < 0 or self.assignments.max(initial=0) >= self.k:
            raise IntegrityError("cluster index out of range")
        for c, s in enumerate(self.summaries):
            s.check()
            if s != build_histogram(dataset, self.members(c)):
                raise IntegrityError(f"cluster {c}: summary differs from its members")
            if self.modes is not None and s.member_count and not np.array_equal(self.modes[c], s.mode()):
                raise IntegrityError(f"cluster {c}: stale mode")


def seed_first_k_distinct(dataset: CategoricalDataset, k: int) -> np.ndarray:
    """Indices of the first k pairwise-distinct records in file order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    seen = set()
    seeds = []
    for i, row in enumerate(dataset.records):
        key = row.tobytes()
        if key in seen:
            continue
        seen.add(key)
        seeds.append(i)
        if len(seeds) == k:
            return np.array(seeds, dtype=np.int64)
    raise SeedError(k, len(seen))


def cost(model: ClusterModel, dataset: CategoricalDataset | None = None) -> Fraction:
    """Total match score of every object against its own cluster's summary.

    Equals ``sum_c sum_j sum_v f_cjv**2 / den_c`` since each member with
    value v contributes f_cjv to its cluster's numerator.
    """
    n = len(model.assignments)
    total = Fraction(0)
    for s in model.summaries:
        if s.member_count == 0:
            continue
        sq = sum(int((c * c).sum()) for c in s.counts)
        total += Fraction(sq, n if model.denominator == "dataset" else s.member_count)
    return total


def run(dataset: CategoricalDataset, k: int, algorithm: Algorithm | str = KHIST,
        config: RunConfig | None = None) -> tuple[ClusterModel, ConvergenceStats]:
    if isinstance(algorithm, str):
        algorithm = Algorithm.parse(algorithm)
    config = config or RunConfig()
    seeds = seed_first_k_distinct(dataset, k)
    if config.engine == "reference":
        return _run_reference(dataset, k, algorithm, config, seeds)
    return _run_fast(dataset, k, algorithm, config, seeds)


def run_khistograms(dataset, k, config=None):
    return run(dataset, k, KHIST, config)


def run_kmodes(dataset, k, config=None):
    return run(dataset, k, KMODES, config)


def run_avft(dataset, k, threshold, config=None):
    return run(dataset, k, Algorithm("avft", Fraction(str(threshold)) if isinstance(threshold, float)
                                     else Fraction(threshold)), config)


def _check_moves(moves):
    for mv in moves:
        if not mv.dst_score > mv.src_score:
            raise IntegrityError(f"non-improving move: {mv.format()}")


# ---------------------------------------------------------------- fast engine

_ALGO_CODES = {"khist": _kernels.KHIST, "kmodes": _kernels.KMODES, "avft": _kernels.AVFT}


def _run_fast(dataset, k, algorithm, config, seeds):
    X = np.ascontiguousarray(dataset.records, dtype=np.int32)
    n, m = X.shape
    pvals = np.array(dataset.schema.value_counts, dtype=np.int64)
    P = int(pvals.max())
    counts = np.zeros((k, m, P), dtype=np.int64)
    sizes = np.zeros(k, dtype=np.int64)
    W = np.zeros_like(counts)
    assign = np.full(n, -1, dtype=np.int64)
    algo = _ALGO_CODES[algorithm.name]
    t = algorithm.threshold if algorithm.threshold is not None else Fraction(0)
    tnum, tden = t.numerator, t.denominator
    dataset_den = n if config.denominator == "dataset" else 0

    is_seed = np.zeros(n, dtype=np.bool_)
    is_seed[seeds] = True
    for c, i in enumerate(seeds):
        assign[i] = c
        counts[c, np.arange(m), X[i]] += 1
        sizes[c] = 1
        _kernels.refresh(c, counts, sizes, W, pvals, algo, tnum, tden)
    _kernels.allocate(X, is_seed, counts, sizes, W, assign, pvals, algo, tnum, tden, dataset_den)

    def model():
        summaries = [ClusterSummary([counts[c, j, :pvals[j]].copy() for j in range(m)], int(sizes[c]))
                     for c in range(k)]
        modes = W.argmax(axis=2) if algorithm.name == "kmodes" else None
        return ClusterModel(assign.copy(), summaries, k, algorithm, tuple(int(s) for s in seeds),
                            config.denominator, modes)

    stats = ConvergenceStats(initial_assignments=assign.copy())
    buf = np.zeros((n, 7), dtype=np.int64)
    while stats.iterations < config.max_iterations:
        nmoves, vetoes = _kernels.sweep(X, counts, sizes, W, assign, pvals, algo, tnum, tden,
                                        dataset_den, buf)
        stats.iterations += 1
        stats.swaps_per_iteration.append(int(nmoves))
        stats.vetoes_per_iteration.append(int(vetoes))
        if config.trace:
            moves = [Move(stats.iterations, int(r[0]), int(r[1]), int(r[2]),
                          Fraction(int(r[3]), int(r[4])), Fraction(int(r[5]), int(r[6])))
                     for r in buf[:nmoves]]
            _check_moves(moves)
            stats.moves.extend(moves)
        current = model()
        if config.validate:
            current.check(dataset)
        stats.cost_trace.append(cost(current))
        if nmoves == 0:
            stats.converged = True
            break
    return model(), stats


# ----------------------------------------------------------- reference engine

def _scorer(algorithm: Algorithm, denominator: int | None) -> Callable:
    if algorithm.name == "khist":
        return lambda s, mode, x: d4(s, x, denominator)
    if algorithm.name == "avft":
        t = algorithm.threshold
        return lambda s, mode, x: avft_score(s, x, t, denominator)
    # nearest mode = fewest mismatches = most matches
    return lambda s, mode, x: Fraction(len(x) - d1(x, mode))


def _run_reference(dataset, k, algorithm, config, seeds):
    X = [tuple(int(v) for v in row) for row in dataset.records]
    n = len(X)
    pvals = dataset.schema.value_counts
    score = _scorer(algorithm, n if config.denominator == "dataset" else None)
    summaries = [ClusterSummary.empty(pvals) for _ in range(k)]
    modes: list = [None] * k
    assign = [-1] * n
    seed_set = set(int(s) for s in seeds)

    def refresh(c):
        if algorithm.name == "kmodes":
            modes[c] = tuple(int(v) for v in summaries[c].mode())

    def best_of(x):
        scores = [score(summaries[c], modes[c], x) for c in range(k)]
        best = 0
        for c in range(1, k):
            if scores[c] > scores[best]:
                best = c
        return best, scores

    for c, i in enumerate(seeds):
        assign[i] = c
        summaries[c].add(X[i])
        refresh(c)
    for i in range(n):
        if i in seed_set:
            continue
        c, _ = best_of(X[i])
        assign[i] = c
        summaries[c].add(X[i])
        refresh(c)

    def model():
        return ClusterModel(np.array(assign, dtype=np.int64), [s.copy() for s in summaries], k,
                            algorithm, tuple(int(s) for s in seeds), config.denominator,
                            np.array(modes, dtype=np.int64) if algorithm.name == "kmodes" else None)

    stats = ConvergenceStats(initial_assignments=np.array(assign, dtype=np.int64))
    while stats.iterations < config.max_iterations:
        stats.iterations += 1
        moves, vetoes = [], 0
        for i in range(n):
            cur = assign[i]
            best, scores = best_of(X[i])
            if best == cur or not scores[best] > scores[cur]:
                continue
            if summaries[cur].member_count == 1:
                vetoes += 1
                continue
            moves.append(Move(stats.iterations, i, cur, best, scores[cur], scores[best]))
            summaries[cur].remove(X[i])
            summaries[best].add(X[i])
            assign[i] = best
            refresh(cur)
            refresh(best)
        stats.swaps_per_iteration.append(len(moves))
        stats.vetoes_per_iteration.append(vetoes)
        if config.trace:
            _check_moves(moves)
            stats.moves.extend(moves)
        current = model()
        if config.validate:
            current.check(dataset)
        stats.cost_trace.append(cost(current))
        if not moves:
            stats.converged = True
            break
    return model(), stats

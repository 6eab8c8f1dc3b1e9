"""Acceptance criteria, one test each, at their stated tolerances.

Each test records a PASS/FAIL line that is printed in the session summary.
The full mushroom file is used when present in data/; otherwise the
bundled complete-case subset stands in and the line says so.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from khist import cli
from khist.bench import load_preset, run_sweep
from khist.clustering import KHIST, KMODES, Algorithm, RunConfig, cost, run, run_avft, run_khistograms
from khist.dataset import from_codes
from khist.dissimilarity import d2, d3, d4
from khist.errors import IntegrityError

from conftest import MUSHROOM_FULL, record_acceptance
from strategies import random_codes, summary_of

MAX_ITER = 100


def mushroom_note(ds):
    if ds.name == "mushroom":
        return f"mushroom n={ds.n}"
    return f"mushroom complete-case subset n={ds.n} (full file absent)"


def preset_sweep(name, dataset):
    spec = load_preset(name)
    return run_sweep(spec, dataset=dataset)


@pytest.fixture(scope="module")
def voting_sweep(voting):
    return preset_sweep("voting", voting)


@pytest.fixture(scope="module")
def mushroom_sweep(mushroom):
    return preset_sweep("mushroom" if mushroom.name == "mushroom" else "mushroom-complete", mushroom)


def head_to_head(result):
    ks = result.spec.ks
    kh = {k: result.report("khist", k) for k in ks}
    km = {k: result.report("kmodes", k) for k in ks}
    return ks, kh, km


# 1 -------------------------------------------------------------------------

def test_1_compression_soundness():
    rng = np.random.default_rng(20240101)
    checks = 0
    bad = []
    for trial in range(200):
        n = int(rng.integers(1, 51))
        m = int(rng.integers(1, 7))
        records, ps = random_codes(rng, n, m, 5)
        for _ in range(5):
            size = int(rng.integers(1, n + 1))
            members = rng.choice(n, size=size, replace=False)
            s = summary_of(records[members], ps)
            for _ in range(5):
                y = [int(rng.integers(0, p)) for p in ps]
                lhs = d2(records[members], y)
                mid = d3(s, y)
                checks += 1
                if lhs != mid or mid + d4(s, y) != m:
                    bad.append((trial, members.tolist(), y))
    ok = not bad
    record_acceptance("1 compression soundness", ok,
                      f"{checks} exact checks of d2 == d3 and d3 + d4 == m on 200 datasets, {len(bad)} failures")
    assert ok, bad[:3]


# 2 -------------------------------------------------------------------------

SCALE = 2520  # lcm(1..10): every cost times this is an integer for n <= 10


def labelings(n, k):
    """Every assignment of n objects to k clusters with no cluster empty."""
    grid = np.indices((k,) * n).reshape(n, -1).T
    full = np.ones(len(grid), dtype=bool)
    for c in range(k):
        full &= (grid == c).any(axis=1)
    return grid[full]


def scaled_costs(records, ps, k, dataset_den):
    n = len(records)
    offsets = np.concatenate([[0], np.cumsum(ps)[:-1]])
    onehot = np.zeros((n, int(sum(ps))), dtype=np.int64)
    for j, off in enumerate(offsets):
        onehot[np.arange(n), off + records[:, j]] = 1
    labs = labelings(n, k)
    total = np.zeros(len(labs), dtype=np.int64)
    for c in range(k):
        member = (labs == c).astype(np.int64)
        f = member @ onehot
        sq = (f * f).sum(axis=1)
        den = np.full(len(labs), n) if dataset_den else member.sum(axis=1)
        total += sq * (SCALE // den)
    return int(total.min()), int(total.max())


def brute_force_cases():
    # every dataset over two binary attributes with n = 4 ...
    for rows in itertools.product(range(4), repeat=4):
        yield np.array([[r // 2, r % 2] for r in rows])
    # ... plus a seeded sample up to n = 10
    rng = np.random.default_rng(7)
    for _ in range(150):
        n = int(rng.integers(2, 11))
        m = int(rng.integers(1, 5))
        yield random_codes(rng, n, m, 3)[0]


def test_2_brute_force_oracle():
    algos = [KHIST, KMODES, Algorithm("avft", Fraction(1, 2))]
    runs = 0
    out_of_range = []
    trace_failures = []
    for records in brute_force_cases():
        ds = from_codes(records)
        codes = np.asarray(ds.records, dtype=np.int64)
        ps = list(ds.schema.value_counts)
        for k in range(1, min(3, ds.distinct_count()) + 1):
            for den in ("cluster", "dataset"):
                lo, hi = scaled_costs(codes, ps, k, den == "dataset")
                for algo in algos:
                    try:
                        model, _ = run(ds, k, algo, RunConfig(denominator=den, trace=True, validate=True))
                    except IntegrityError as exc:
                        trace_failures.append(str(exc))
                        continue
                    runs += 1
                    c = cost(model) * SCALE
                    if not (c.denominator == 1 and lo <= c <= hi):
                        out_of_range.append((codes.tolist(), k, den, str(algo)))
    ok = not out_of_range and not trace_failures
    record_acceptance("2 brute-force oracle", ok,
                      f"{runs} traced runs (n <= 10, k <= 3) within exhaustive cost range; "
                      f"{len(out_of_range)} out of range, {len(trace_failures)} move assertions failed")
    assert ok


# 3 -------------------------------------------------------------------------

def test_3_voting_directional(voting_sweep):
    ks, kh, km = head_to_head(voting_sweep)
    wins_or_ties = sum(kh[k].error <= km[k].error for k in ks)
    mean_kh = sum(kh[k].error for k in ks) / len(ks)
    mean_km = sum(km[k].error for k in ks) / len(ks)
    ok = wins_or_ties >= 4
    record_acceptance("3 voting directional", ok,
                      f"k-histograms wins or ties {wins_or_ties}/8 (need >= 4); mean error "
                      f"{float(mean_kh):.4f} vs k-modes {float(mean_km):.4f}")
    assert ok


# 4 -------------------------------------------------------------------------

def test_4_mushroom_directional(mushroom, mushroom_sweep):
    ks, kh, km = head_to_head(mushroom_sweep)
    strict = sum(kh[k].error < km[k].error for k in ks)
    swaps_kh = sum(kh[k].total_swaps for k in ks)
    swaps_km = sum(km[k].total_swaps for k in ks)
    majority = strict > len(ks) / 2
    fewer_swaps = swaps_kh < swaps_km
    ok = majority and fewer_swaps
    record_acceptance("4 mushroom directional", ok,
                      f"[{mushroom_note(mushroom)}] strictly lower error in {strict}/{len(ks)} "
                      f"({'ok' if majority else 'not a majority'}); total swaps {swaps_kh} vs k-modes "
                      f"{swaps_km} ({'ok' if fewer_swaps else 'not lower'})")
    assert ok


# 5 -------------------------------------------------------------------------

def test_5_pure_cluster_dominance(mushroom, mushroom_sweep):
    ks, kh, km = head_to_head(mushroom_sweep)
    good = sum(kh[k].pure_clusters >= km[k].pure_clusters for k in ks)
    need = math.ceil(0.8 * len(ks))
    ok = good >= need
    record_acceptance("5 pure-cluster dominance", ok,
                      f"[{mushroom_note(mushroom)}] k-histograms >= k-modes in {good}/{len(ks)} (need >= {need})")
    assert ok


# 6 -------------------------------------------------------------------------

def test_6_avft_endpoint(tmp_path, voting, mushroom):
    differing = []
    cells = 0
    for ds, preset in ((voting, "voting"), (mushroom, "mushroom")):
        for k in load_preset(preset).ks:
            a, _ = run_khistograms(ds, k)
            b, _ = run_avft(ds, k, 0)
            pa, pb = tmp_path / f"{ds.name}-{k}-khist.csv", tmp_path / f"{ds.name}-{k}-avft.csv"
            cli.write_assignments(pa, a.assignments)
            cli.write_assignments(pb, b.assignments)
            cells += 1
            if pa.read_bytes() != pb.read_bytes():
                differing.append((ds.name, k))
    ok = not differing
    record_acceptance("6 avft endpoint identity", ok,
                      f"{cells} (dataset, k) assignment files compared byte for byte on voting and "
                      f"{mushroom_note(mushroom)}; {len(differing)} differ")
    assert ok


# 7 -------------------------------------------------------------------------

def _bench_twice(preset, tmp_path):
    outs = []
    for rep in ("a", "b"):
        out = tmp_path / preset / rep
        assert cli.main(["bench", "--preset", preset, "--out", str(out)]) == 0
        outs.append(out)
    files = sorted(p.name for p in outs[0].iterdir())
    assert files == sorted(p.name for p in outs[1].iterdir())
    return [f for f in files if (outs[0] / f).read_bytes() != (outs[1] / f).read_bytes()], files


def test_7_determinism(tmp_path, capsys):
    presets = ["voting", "mushroom-complete"] + (["mushroom"] if MUSHROOM_FULL.exists() else [])
    summary = []
    all_same = True
    for preset in presets:
        diff, files = _bench_twice(preset, tmp_path)
        capsys.readouterr()
        csvs = [f for f in files if f.endswith(".csv")]
        summary.append(f"{preset}: {len(csvs)} CSVs, {len(files)} files, {len(diff)} differ")
        all_same &= not any(f.endswith(".csv") for f in diff)
    if not MUSHROOM_FULL.exists():
        summary.append("mushroom preset not run (full file absent)")
    record_acceptance("7 determinism", all_same, "; ".join(summary))
    assert all_same


# 8 -------------------------------------------------------------------------

def test_8_convergence(voting_sweep, mushroom_sweep, mushroom):
    parts = []
    ok = True
    for label, result in (("voting", voting_sweep), (mushroom_note(mushroom), mushroom_sweep)):
        stuck = [(r.algorithm, r.k) for r in result.reports if not r.converged]
        most = max(r.iterations for r in result.reports)
        ok &= not stuck
        parts.append(f"{label}: {len(result.reports) - len(stuck)}/{len(result.reports)} converged, "
                     f"max {most} of {MAX_ITER} iterations")
    record_acceptance("8 convergence", ok, "; ".join(parts))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

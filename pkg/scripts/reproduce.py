"""Run a preset sweep and print error, iterations, swaps and purity per k.

Usage: python3 scripts/reproduce.py voting|mushroom|mushroom-complete [--out DIR]

Writes the same files as ``khist bench`` and prints a side-by-side table
plus the ranking totals.
"""
import argparse
import sys
from pathlib import Path

from khist.bench import PRESETS, load_preset, run_sweep, write_sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("preset", choices=PRESETS)
    ap.add_argument("--out", default=None, help="output directory (default: results/<preset>)")
    ap.add_argument("--data-dir", default=None)
    args = ap.parse_args(argv)

    spec = load_preset(args.preset, args.data_dir)
    if not Path(spec.dataset).exists():
        print(f"{spec.dataset} not found; run scripts/fetch_uci.py or use mushroom-complete", file=sys.stderr)
        return 2
    result = run_sweep(spec)
    algos = spec.algorithms
    print(f"{'k':>3} " + " ".join(f"{a + ' err':>12}{'it':>4}{'swaps':>7}{'pure':>5}" for a in algos))
    for k in spec.ks:
        cells = []
        for a in algos:
            r = result.report(a, k)
            cells.append(f"{float(r.error):>12.4f}{r.iterations:>4}{r.total_swaps:>7}{r.pure_clusters:>5}")
        print(f"{k:>3} " + " ".join(cells))
    for a in algos:
        rs = [result.report(a, k) for k in spec.ks]
        print(f"{a}: mean error {sum(float(r.error) for r in rs) / len(rs):.4f}, "
              f"total swaps {sum(r.total_swaps for r in rs)}")
    print()
    print(result.ranking.format_text())
    out = Path(args.out) if args.out else Path("results") / spec.name
    write_sweep(result, out)
    print(f"files in {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

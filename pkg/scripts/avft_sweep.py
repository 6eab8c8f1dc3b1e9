"""Error of the frequency-threshold family across thresholds and k.

Usage: python3 scripts/avft_sweep.py [voting|mushroom|mushroom-complete] [--thresholds 0,1/4,1/2,3/4,1]

Threshold 0 reproduces k-histograms exactly; k-modes is listed for reference.
"""
import argparse
import sys
from dataclasses import replace
from fractions import Fraction

from khist.bench import PRESETS, load_preset, run_sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("preset", nargs="?", default="voting", choices=PRESETS)
    ap.add_argument("--thresholds", default="0,1/4,1/2,3/4,1")
    args = ap.parse_args(argv)

    ts = [Fraction(t) for t in args.thresholds.split(",")]
    spec = replace(load_preset(args.preset), algorithms=tuple(f"avft({t})" for t in ts) + ("khist", "kmodes"))
    result = run_sweep(spec)
    print("k    " + "".join(f"{a:>13}" for a in spec.algorithms))
    for k in spec.ks:
        print(f"{k:<5}" + "".join(f"{float(result.report(a, k).error):>13.4f}" for a in spec.algorithms))
    print("mean " + "".join(
        f"{sum(float(result.report(a, k).error) for k in spec.ks) / len(spec.ks):>13.4f}" for a in spec.algorithms))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Download the UCI voting and mushroom files into data/.

Usage: python3 scripts/fetch_uci.py [--dest DIR] [--force]

Needs network access. The bundled data/ already holds the voting file and
a complete-case mushroom subset; this adds the full 8124-record mushroom
file used by the ``mushroom`` preset.
"""
import argparse
import hashlib
import sys
import urllib.request
from pathlib import Path

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"
FILES = {
    "house-votes-84.data": f"{BASE}/voting-records/house-votes-84.data",
    "agaricus-lepiota.data": f"{BASE}/mushroom/agaricus-lepiota.data",
}
EXPECTED_ROWS = {"house-votes-84.data": 435, "agaricus-lepiota.data": 8124}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default=str(Path(__file__).resolve().parents[1] / "data"))
    ap.add_argument("--force", action="store_true", help="overwrite existing files")
    args = ap.parse_args(argv)
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    status = 0
    for name, url in FILES.items():
        target = dest / name
        if target.exists() and not args.force:
            print(f"{name}: present, skipped")
            continue
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                body = resp.read()
        except OSError as exc:
            print(f"{name}: download failed: {exc}", file=sys.stderr)
            status = 1
            continue
        rows = sum(1 for line in body.decode().splitlines() if line.strip())
        if rows != EXPECTED_ROWS[name]:
            print(f"{name}: expected {EXPECTED_ROWS[name]} rows, got {rows}; not written", file=sys.stderr)
            status = 1
            continue
        target.write_bytes(body)
        print(f"{name}: {rows} rows, sha256 {hashlib.sha256(body).hexdigest()[:16]}")
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Empirical vs predicted counts for every catalog constellation.

    python scripts/compare_all.py --max 10000000 --out-dir results/
"""
import argparse
from pathlib import Path

from cnsieve.analytic import MODES, compute_constants
from cnsieve.base_primes import build_prime_table
from cnsieve.report import compare_series, log_grid, render_csv
from cnsieve.variants import parse_kind

KINDS = ["twin", "gap:2", "gap:3", "sg", "triplet", "quad"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max", type=int, default=10**7)
    ap.add_argument("--points", type=int, default=31)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = build_prime_table(2 * args.max + 100)
    constants = compute_constants(min(10**7, table.limit), table)
    xs = log_grid(args.max, args.points)
    for name in KINDS:
        kind = parse_kind(name)
        for mode in MODES:
            rows = compare_series(kind, xs, mode, table, constants)
            path = out / f"{name.replace(':', '')}_{mode}.csv"
            path.write_text(render_csv(rows))
            last = rows[-1]
            print(f"{name:8s} {mode:8s} x={last.x:<10d} empirical={last.empirical:<8d} ratio={last.ratio:.4f}")


if __name__ == "__main__":
    main()

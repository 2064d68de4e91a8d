"""Empirical hierarchy errors against the proven Krawtchouk-root bound.

Runs random degree-d instances at several orders and dimensions, recording
the largest observed normalized inner/outer gaps next to 2 C_d xi_{r+1}^n / n.

Usage: python scripts/error_bounds_sweep.py --d 2 --n 8,10 [--out FILE.csv]
"""

import argparse
import csv
import sys

from cubesos.kernel_certifier import error_sweep


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--n", default="8,10")
    ap.add_argument("--r-fractions", default="0.2,0.3,0.4,0.5")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = list(error_sweep(
        args.d,
        [int(v) for v in args.n.split(",")],
        [float(v) for v in args.r_fractions.split(",")],
        samples=args.samples,
        seed=args.seed,
    ))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(out, fieldnames=["n", "r", "t", "max_outer_gap",
                                             "max_inner_gap", "bound_2Cd_xi_over_n",
                                             "phi(t)", "errors"])
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    if args.out:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())

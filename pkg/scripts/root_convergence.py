"""Convergence of scaled Krawtchouk least roots to the limiting curve.

For each (q, t) the gap |xi_{floor(tn)}^n / n - phi_q(t)| is tabulated over a
doubling sequence of n, showing the monotone approach that drives the
hierarchy error rates.

Usage: python scripts/root_convergence.py [--out FILE.csv]
"""

import argparse
import csv
import sys

from cubesos.krawtchouk import least_root, levenshtein_phi


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", default="2,3", help="comma list of alphabet sizes")
    ap.add_argument("--t", default="0.1,0.25,0.4,0.5", help="comma list of r/n ratios")
    ap.add_argument("--n", default="50,100,200,400", help="comma list of dimensions")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    qs = [int(v) for v in args.q.split(",")]
    ts = [float(v) for v in args.t.split(",")]
    ns = [int(v) for v in args.n.split(",")]

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["q", "t", "n", "r", "xi_over_n", "phi_q", "gap"])
    for q in qs:
        for t in ts:
            for n in ns:
                r = int(t * n)
                xi = least_root(n, q, r) / n
                phi = levenshtein_phi(t, q)
                writer.writerow([q, t, n, r, f"{xi:.12g}", f"{phi:.12g}",
                                 f"{abs(xi - phi):.12g}"])
    if args.out:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())

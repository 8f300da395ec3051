#!/usr/bin/env python3
"""Tabulate return probabilities against their 1/(2d) scaling.

Emits CSV on stdout: the simple walk's return probability p_d, the
diagonal-line return probability P_d (d >= 4), their 2d-scalings, and
the Green-value excess E_d = G_d(0) - 1 - 1/(2d).  Both scalings descend
monotonically toward 1; the excess carries the o(1/d) remainder.
"""

import argparse
import csv
import sys

from walkcover.green import asymptotic_sweep


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--dmin", type=int, default=3)
    ap.add_argument("--dmax", type=int, default=10)
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()

    table = asymptotic_sweep(args.dmin, args.dmax, tol=args.tol)
    w = csv.writer(sys.stdout)
    w.writerow(["d", "p_return", "2d_p", "P_diagonal", "2d_P", "excess", "d_excess"])
    for r in table.rows:
        w.writerow([r.d, f"{r.p_return:.6f}", f"{r.scaled_return:.6f}",
                    "" if r.p_diagonal is None else f"{r.p_diagonal:.6f}",
                    "" if r.scaled_diagonal is None else f"{r.scaled_diagonal:.6f}",
                    f"{r.excess:.6e}", f"{r.scaled_excess:.6e}"])
    print(f"# {table.note}", file=sys.stderr)
    if not table.trends_ok:
        print(f"# TREND FAILURES: {table.trend_failures}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()

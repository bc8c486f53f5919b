#!/usr/bin/env python3
"""End-to-end analysis of a walk-count series file.

Runs a differential-approximant scan for the critical point and exponent,
then an amplitude-fit trajectory at the estimated critical point, and prints
a summary table.  CSV side outputs land next to the input file.

Usage:
    python3 scripts/run_analysis.py data/saw_counts_n43.series
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sawenum import analysis  # noqa: E402
from sawenum.modseries import read_series  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("series")
    ap.add_argument("--orders", default="2,3")
    ap.add_argument("--pdegrees", default="0,2,4,6,8,10")
    ap.add_argument("--fit-k", type=int, default=3)
    ap.add_argument("--fit-m", type=int, default=1)
    args = ap.parse_args()

    table = read_series(args.series).to_exact()
    coeffs = table.values
    print(f"{len(coeffs)} coefficients from {args.series}")

    orders = tuple(int(x) for x in args.orders.split(","))
    pdegrees = tuple(int(x) for x in args.pdegrees.split(","))

    print("\ndifferential-approximant scan")
    print(f"{'L':>3} {'K':>3} {'#':>4} {'x_c':>18} {'exponent':>14}")
    all_estimates = []
    for pdeg in pdegrees:
        for order in orders:
            ests = analysis.da_scan(coeffs, orders=(order,), pdegrees=(pdeg,))
            if not ests:
                print(f"{pdeg:>3} {order:>3}    0  (all defective)")
                continue
            all_estimates.extend(ests)
            mx, sx, ml, sl = analysis.summarize_estimates(ests)
            print(f"{pdeg:>3} {order:>3} {len(ests):>4} "
                  f"{mx:.12f}({sx:.1e}) {ml:.8f}({sl:.1e})")
    if not all_estimates:
        print("no usable approximants")
        return 1
    mx, sx, ml, sl = analysis.summarize_estimates(all_estimates)
    print(f"overall: x_c = {mx:.12f} +- {sx:.2e}, "
          f"exponent = {ml:.8f} +- {sl:.2e}")

    e1, e2 = analysis.MODEL_EXPONENTS["count"]
    mu = 1.0 / mx
    fits = analysis.amplitude_trajectory(
        coeffs, mu, e1, e2, args.fit_k, args.fit_m)
    if fits:
        print(f"\namplitude trajectory (k={args.fit_k}, m={args.fit_m}, "
              f"mu = 1/x_c from the scan)")
        for f in fits[-5:]:
            print(f"  last_n={f.last_n:>3}  a0 = {f.leading:.8f}")
        out = Path(args.series).with_suffix(".amplitudes.csv")
        rows = analysis.amplitude_report_rows(fits)
        out.write_text(
            "inv_n,a0_estimate\n"
            + "\n".join(",".join(r) for r in rows) + "\n"
        )
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

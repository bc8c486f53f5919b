#!/usr/bin/env python3
"""Generate the walk series for a large cut-off width, one width per process.

Each width's sweep runs in a fresh subprocess whose memory is returned to the
OS when it exits; the resulting completion ledger is pickled into a cache
directory, so an interrupted run resumes where it stopped.  When every width
is cached the ledgers are assembled into the final series file.

Usage:
    python3 scripts/generate_series.py --wmax 21 -o data/saw_counts_n43.series
"""

from __future__ import annotations

import argparse
import gc
import pickle
import resource
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sawenum import engine, flm  # noqa: E402
from sawenum.modseries import DEFAULT_MODULI, write_series  # noqa: E402


def ledger_path(cache: Path, wmax: int, width: int) -> Path:
    return cache / f"wmax{wmax}_w{width}.ledger.pickle"


def run_width(wmax: int, width: int, cache: Path) -> None:
    gc.disable()  # the sweep holds one huge dict; cycle collection only stalls it
    n_max = 2 * wmax + 1
    l_max = 2 * wmax - width + 1
    ledger = engine.sweep(width, l_max, n_max, DEFAULT_MODULI, prune=True)
    out = ledger_path(cache, wmax, width)
    tmp = out.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        pickle.dump(ledger, fh, protocol=pickle.HIGHEST_PROTOCOL)
    tmp.rename(out)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wmax", type=int, required=True)
    ap.add_argument("-o", "--output", required=True)
    ap.add_argument("--cache", default=None,
                    help="ledger cache directory (default: OUTPUT dir /ledgers)")
    ap.add_argument("--width", type=int, default=None,
                    help=argparse.SUPPRESS)  # internal: child mode
    args = ap.parse_args()

    cache = Path(args.cache) if args.cache else Path(args.output).parent / "ledgers"
    cache.mkdir(parents=True, exist_ok=True)

    if args.width is not None:
        run_width(args.wmax, args.width, cache)
        return 0

    # cheap widths first: the extremes are tightly pruned, the middle widths
    # carry almost all of the cost
    widths = sorted(range(args.wmax + 1),
                    key=lambda w: min(w, args.wmax - w + 4))
    for w in widths:
        if ledger_path(cache, args.wmax, w).exists():
            print(f"width {w:2d}: cached", flush=True)
            continue
        t0 = time.time()
        before = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
        subprocess.run(
            [sys.executable, __file__, "--wmax", str(args.wmax),
             "-o", args.output, "--cache", str(cache), "--width", str(w)],
            check=True,
        )
        peak = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
        print(f"width {w:2d}: {time.time() - t0:9.1f}s  "
              f"child peak RSS {max(peak, before) / 1e6:.2f} GB", flush=True)

    ledgers = []
    for w in range(args.wmax + 1):
        with open(ledger_path(cache, args.wmax, w), "rb") as fh:
            ledgers.append(pickle.load(fh))
    plan = flm.RunPlan(w_max=args.wmax)
    table = flm.assemble(ledgers, plan).to_exact()
    write_series(table, args.output)
    print(f"wrote {args.output}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: enumerate, oracle, box, verify, crt, analyze, fit,
ratios.

Every output file starts with a reproducibility header (tool version, run
parameters, moduli).  Headers carry no timestamps, so identical inputs produce
byte-identical files regardless of worker count.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, analysis, flm, oracle
from .modseries import (
    DEFAULT_MODULI,
    SeriesFormatError,
    SeriesTable,
    read_series,
    write_series,
)


class CliError(Exception):
    """User-facing error: bad input file or unusable parameters."""


def _parse_moduli(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(m) for m in text.split(","))
    except ValueError as exc:
        raise CliError(f"bad --moduli value {text!r}: {exc}") from exc


def _load_series(path) -> SeriesTable:
    try:
        return read_series(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    except SeriesFormatError as exc:
        raise CliError(str(exc)) from exc


def _base_meta(args_desc: str) -> dict:
    return {"tool": f"sawenum {__version__}", "command": args_desc}


def _write_csv(path, header_meta: dict, columns: tuple[str, ...], rows) -> None:
    lines = [f"# {k}: {v}" for k, v in header_meta.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(str(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_enumerate(args) -> int:
    plan = flm.RunPlan(
        w_max=args.wmax,
        moduli=_parse_moduli(args.moduli),
        workers=args.workers,
        prune=not args.no_prune,
    )
    table = flm.enumerate_series(plan)
    if not args.residues:
        table = table.to_exact()
    table.metadata.update(_base_meta(f"enumerate --wmax {args.wmax}"))
    table.metadata["workers-invariant"] = "true"
    write_series(table, args.output)
    return 0


def _cmd_oracle(args) -> int:
    table = oracle.count_walks(args.nmax)
    table.metadata.update(_base_meta(f"oracle --nmax {args.nmax}"))
    write_series(table, args.output)
    if args.metrics:
        for quantity, t in zip(("r2e", "r2g", "r2m"),
                               oracle.metric_sums(args.nmax)):
            t.metadata.update(_base_meta(f"oracle --nmax {args.nmax}"))
            write_series(t, f"{args.output}.{quantity}")
    return 0


def _cmd_box(args) -> int:
    nmax = args.nmax if args.nmax is not None else args.width + 3 * args.length
    if args.oracle:
        table = oracle.box_spanning_counts(args.width, args.length, nmax)
    else:
        poly = flm.box_counts(args.width, args.length, nmax,
                              moduli=_parse_moduli(args.moduli))
        table = SeriesTable(
            [poly.residues(d) for d in range(nmax + 1)],
            poly.moduli,
            {"lattice": "square", "quantity": "box_count",
             "width": str(args.width), "length": str(args.length),
             "nmax": str(nmax), "method": "transfer-matrix"},
        ).to_exact()
    table.metadata.update(
        _base_meta(f"box --width {args.width} --length {args.length}"))
    write_series(table, args.output)
    return 0


def _cmd_verify(args) -> int:
    a = _load_series(args.file_a).to_exact()
    b = _load_series(args.file_b).to_exact()
    overlap = min(len(a), len(b))
    if overlap == 0:
        raise CliError("no overlapping coefficients to compare")
    for n in range(overlap):
        if a[n] != b[n]:
            print(f"mismatch at n={n}: {a[n]} != {b[n]}")
            return 1
    print(f"OK: {overlap} coefficients agree (n = 0..{overlap - 1})")
    return 0


def _cmd_crt(args) -> int:
    table = _load_series(args.series)
    if table.is_exact:
        print("series already exact; copying through", file=sys.stderr)
    table = table.to_exact()
    table.metadata.update(_base_meta("crt"))
    write_series(table, args.output)
    return 0


def _cmd_analyze(args) -> int:
    table = _load_series(args.series).to_exact()
    min_last_n = args.min_terms - 1 if args.min_terms else None
    estimates = analysis.da_scan(
        table.values,
        orders=(args.order,),
        pdegrees=(args.inhomog,),
        min_last_n=min_last_n,
    )
    if not estimates:
        raise CliError("no surviving approximants (all defective)")
    meta = _base_meta(
        f"analyze --order {args.order} --inhomog {args.inhomog}")
    meta["series"] = str(args.series)
    rows = [
        (e.spec.pdegree, e.spec.order, e.last_n, repr(e.x), repr(e.exponent))
        for e in estimates
    ]
    _write_csv(args.output, meta,
               ("inhomog_degree", "order", "last_n", "x_c", "exponent"), rows)
    mx, sx, ml, sl = analysis.summarize_estimates(estimates)
    print(f"{len(estimates)} approximants: x_c = {mx!r} +- {sx:.3g}, "
          f"exponent = {ml!r} +- {sl:.3g}")
    return 0


def _cmd_fit(args) -> int:
    table = _load_series(args.series).to_exact()
    e1, e2 = analysis.MODEL_EXPONENTS[args.model]
    fits = analysis.amplitude_trajectory(
        table.values, args.mu, e1, e2, args.k, args.m)
    if not fits:
        raise CliError("no solvable fit windows")
    meta = _base_meta(
        f"fit --model {args.model} --k {args.k} --m {args.m}")
    meta["series"] = str(args.series)
    meta["mu"] = repr(args.mu)
    _write_csv(args.output, meta, ("inv_n", "a0_estimate"),
               analysis.amplitude_report_rows(fits))
    print(f"a0 at last_n={fits[-1].last_n}: {fits[-1].leading!r}")
    return 0


def _cmd_ratios(args) -> int:
    if args.C == 0:
        raise CliError("amplitude C must be nonzero")
    # raw metric-series fits estimate the products A*C, A*D, A*E; the ratios
    # only need D/C and E/C, so dividing each by A changes nothing but keeps
    # the reported amplitudes on the paper-normalized scale
    report = analysis.universal_ratios(
        args.C / args.A, args.D / args.A, args.E / args.A)
    print(f"D/C = {report.d_over_c!r}")
    print(f"E/C = {report.e_over_c!r}")
    print(f"F = {report.f!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sawenum",
        description="Exact self-avoiding-walk enumeration and series analysis",
    )
    parser.add_argument("--version", action="version",
                        version=f"sawenum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    moduli_default = ",".join(str(m) for m in DEFAULT_MODULI)

    p = sub.add_parser("enumerate",
                       help="transfer-matrix walk series up to n = 2*wmax + 1")
    p.add_argument("--wmax", type=int, required=True)
    p.add_argument("--moduli", default=moduli_default,
                   help="comma-separated coprime moduli")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-prune", action="store_true",
                   help="disable state pruning (diagnostic)")
    p.add_argument("--residues", action="store_true",
                   help="write per-modulus residues instead of exact integers")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("oracle", help="brute-force walk series")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--metrics", action="store_true",
                   help="also write FILE.r2e/.r2g/.r2m metric series")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("box", help="spanning-walk counts for one exact box")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--nmax", type=int)
    p.add_argument("--moduli", default=moduli_default)
    p.add_argument("--oracle", action="store_true",
                   help="use the brute-force oracle instead of the engine")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_box)

    p = sub.add_parser("verify",
                       help="compare two series files coefficient by "
                            "coefficient over their overlap")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("crt",
                       help="reconstruct exact integers from a residue series")
    p.add_argument("series")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_crt)

    p = sub.add_parser("analyze",
                       help="differential-approximant singularity scan")
    p.add_argument("--series", required=True)
    p.add_argument("--order", type=int, default=2,
                   help="order K of the fitted ODE")
    p.add_argument("--inhomog", type=int, default=0,
                   help="degree of the inhomogeneous polynomial (-1: none)")
    p.add_argument("--min-terms", type=int, default=0,
                   help="keep only approximants using at least this many "
                        "series terms (default: 3/4 of the series)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("fit", help="asymptotic amplitude fit trajectory")
    p.add_argument("--series", required=True)
    p.add_argument("--model", choices=sorted(analysis.MODEL_EXPONENTS),
                   required=True)
    p.add_argument("--k", type=int, required=True,
                   help="number of leading-part amplitudes")
    p.add_argument("--m", type=int, required=True,
                   help="number of alternating-part amplitudes")
    p.add_argument("--mu", type=float, default=1.0 / 0.379052277752,
                   help="connective constant (default: reciprocal of the "
                        "critical point estimate)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("ratios",
                       help="universal amplitude ratios from A, C, D, E")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--E", type=float, required=True)
    p.set_defaults(func=_cmd_ratios)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, analysis.AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

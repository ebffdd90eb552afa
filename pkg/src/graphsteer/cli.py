"""Command-line front end: ``graphsteer {sweep,verify,boundaries,state}``.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import GraphSteerError
from .states import DEFAULT_R, FamilyKind
from .sweep import (
    GRAMMAR,
    SweepConfig,
    UsageError,
    boundary_csv,
    boundary_table,
    render_sweep,
    run_sweep,
    run_verification,
    state_csv,
    state_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

QUANTITY_HELP = f"""\
quantity grammar (comma-separated in --quantities, no spaces):
  G(X->Y)        steering of party Y by party X, e.g. G(A->CD)
  MONO(k|i|j)    G(k->ij) - G(k->i) - G(k->j)
  MONOIN(k|i|j)  G(ij->k) - G(i->k) - G(j->k)
  NULL(a)        nullifier variance of mode a
  LN(X|Y)        log-negativity between parties X and Y
parties are runs of mode letters: ABC (tripartite) or ABCD (fourmode).
summary: {GRAMMAR}
"""


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _common(p: argparse.ArgumentParser, fmt_default: str = "csv") -> None:
    p.add_argument("--family", required=True, choices=[k.value for k in FamilyKind])
    p.add_argument("--r", type=float, default=DEFAULT_R, help="squeezing parameter (default 0.345)")
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default=fmt_default)
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsteer",
        description="EPR steering in Gaussian weighted graph states.",
        epilog=QUANTITY_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser(
        "sweep",
        help="evaluate quantities on a parameter grid",
        epilog=QUANTITY_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _common(sweep)
    sweep.add_argument("--axis", choices=["t2", "weight"], default="weight")
    sweep.add_argument("--range", dest="range_", type=_range, default=None, metavar="LO:HI")
    sweep.add_argument("--points", type=int, default=201)
    sweep.add_argument("--quantities", default="", help="comma-separated quantity names")

    verify = sub.add_parser("verify", help="check invariants (monogamy, nullifiers, purity, ...)")
    _common(verify)
    verify.add_argument("--axis", choices=["t2", "weight"], default="weight")
    verify.add_argument("--range", dest="range_", type=_range, default=None, metavar="LO:HI")
    verify.add_argument("--points", type=int, default=201)

    bounds = sub.add_parser("boundaries", help="zero crossings and one-way steering windows")
    _common(bounds)
    bounds.add_argument("--range", dest="range_", type=_range, default=None, metavar="LO:HI")
    bounds.add_argument("--points", type=int, default=201)

    state = sub.add_parser("state", help="dump one covariance matrix and its diagnostics")
    _common(state, fmt_default="json")
    state.add_argument("--t2", type=float, required=True)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _cmd_sweep(args) -> int:
    lo, hi = args.range_ if args.range_ else (None, None)
    quantities = [q for q in args.quantities.split(",") if q.strip()]
    config = SweepConfig(
        args.family, args.axis, lo, hi, args.points, args.r, quantities, args.fmt, args.out
    )
    _emit(render_sweep(run_sweep(config), config), config.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    lo, hi = args.range_ if args.range_ else (None, None)
    results = run_verification(args.family, args.r, args.points, args.axis, lo, hi)
    for res in results:
        print(res.line())
    ok = all(r.passed for r in results)
    print("ALL CHECKS PASSED" if ok else "VERIFICATION FAILED")
    if args.out is not None:
        if args.fmt == "json":
            text = json.dumps([vars(r) for r in results], indent=2) + "\n"
        else:
            lines = ["check,passed,worst,tolerance,offending_weight"]
            lines += [
                f"{r.name},{r.passed},{r.worst!r},{r.tolerance!r},"
                f"{'' if r.offending is None else repr(r.offending)}"
                for r in results
            ]
            text = "\n".join(lines) + "\n"
        _emit(text, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_boundaries(args) -> int:
    lo, hi = args.range_ if args.range_ else (None, None)
    rows = boundary_table(args.family, args.r, args.points, lo, hi)
    text = json.dumps(rows, indent=2) + "\n" if args.fmt == "json" else boundary_csv(rows)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_state(args) -> int:
    report = state_report(args.family, args.t2, args.r)
    text = json.dumps(report, indent=2) + "\n" if args.fmt == "json" else state_csv(report)
    _emit(text, args.out)
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "boundaries": _cmd_boundaries,
    "state": _cmd_state,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, GraphSteerError) as exc:
        print(f"graphsteer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"graphsteer: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

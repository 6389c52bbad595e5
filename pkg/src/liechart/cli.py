"""Command-line entry point: run check suites and emit reports.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 unknown
group/representation/suite, 3 numerical breakdown while checking.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .errors import (
    LeftChart,
    NoConvergence,
    NonFiniteEvaluation,
    NotIntegrable,
    SingularMatrix,
    UnknownEntry,
    ZeroPsi,
)
from .numdiff import CBRT_EPS, DiffConfig
from .suites import SUITE_NAMES, run_suite

_BREAKDOWN = (NonFiniteEvaluation, SingularMatrix, NoConvergence, LeftChart,
              ZeroPsi, NotIntegrable)


def _fd_step(text: str) -> float:
    if text == "auto":
        return CBRT_EPS
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--fd-step takes 'auto' or a real, got {text!r}")
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError("--fd-step must lie in (0, 1)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liechart",
        description="Numeric checks of Lie group composition-law identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a check suite against a catalog group")
    run.add_argument("--group", required=True,
                     help="catalog group, e.g. translation:2, affine, gl:2")
    run.add_argument("--rep", default=None,
                     help="representation name for the rep suite (default: trivial)")
    run.add_argument("--suite", default="all", help=f"one of {', '.join(SUITE_NAMES)}")
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--samples", type=int, default=20)
    run.add_argument("--fd-step", type=_fd_step, default="auto",
                     help="finite-difference base step; 'auto' picks cbrt(eps)")
    run.add_argument("--tol-scale", type=float, default=1.0,
                     help="multiplies every default tolerance")
    run.add_argument("--json", type=Path, default=None,
                     help="write the report to this path as deterministic JSON")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = DiffConfig(base_step=args.fd_step, sample_count=args.samples,
                     rng_seed=args.seed)
    start = time.perf_counter()
    try:
        report = run_suite(args.group, args.suite, cfg,
                           rep_name=args.rep, tol_scale=args.tol_scale)
    except UnknownEntry as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _BREAKDOWN as exc:
        print(f"numerical breakdown: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    report.wall_time_ms = (time.perf_counter() - start) * 1000.0

    print(f"suite={report.suite} group={report.group}"
          + (f" rep={report.rep}" if report.rep else "")
          + f" seed={report.seed} samples={cfg.sample_count}")
    print(report.table())
    if args.json is not None:
        args.json.write_text(report.to_json())
        print(f"report written to {args.json}")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())

"""Command line entry point: ``dunkl verify``."""
from __future__ import annotations

import argparse
import sys

from .errors import DunklError, InvalidConfig, IoFailure
from .suites import SUITES, make_config, read_config_file, run_suite, write_report

__all__ = ["build_parser", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dunkl", description="Numerical checks for one-dimensional Dunkl analysis.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite and write a report")
    v.add_argument("--suite", choices=SUITES + ("all",), help="suite to run (default: all)")
    v.add_argument("--lambda", dest="lambdas", help="comma-separated lambda values")
    v.add_argument("--p", dest="ps", help="comma-separated exponents for the atom suites")
    v.add_argument("--grid-n", type=int, dest="grid_n", help="override the transform grid size")
    v.add_argument("--domain", type=float, dest="domain_X", help="override the spatial truncation X")
    v.add_argument("--y-levels", type=int, dest="y_levels", help="number of y levels in half-plane lattices")
    v.add_argument("--seed", type=int, help="seed for randomly drawn cases")
    v.add_argument("--out", help="JSON report path")
    v.add_argument("--csv", help="CSV table path")
    v.add_argument("--config", help="file of key = value lines; command-line options take precedence")
    v.add_argument("--workers", type=int, help="worker processes (default 1)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    values = {}
    try:
        if args.config:
            values.update(read_config_file(args.config))
        cli = {k: getattr(args, k) for k in ("suite", "lambdas", "ps", "grid_n", "domain_X", "y_levels", "seed", "out",
                                              "csv", "workers")}
        # the config file may spell these as lambda / p / domain
        for short, long in (("lambda", "lambdas"), ("p", "ps"), ("domain", "domain_X")):
            if short in values and cli[long] is None:
                values[long] = values.pop(short)
            values.pop(short, None)
        values.update({k: v for k, v in cli.items() if v is not None})
        cfg = make_config(values)
        report = run_suite(cfg)
        written = write_report(report)
    except InvalidConfig as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    except IoFailure as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3
    except DunklError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    for c in report.cases:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.suite:15s} {c.case_id:45s} value={c.value:.3e} tol={c.tol:.1e}")
    print(f"{len(report.cases)} cases, {len(report.failed)} failed")
    for path in written:
        print(f"wrote {path}")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())

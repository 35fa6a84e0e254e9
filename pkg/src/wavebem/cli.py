"""Command line interface.

    wavebem convergence --case smooth --formulation ht --L 3 --T 6 --levels 3:8 --out table.csv
    wavebem spectral --L 1 --T 1:8 --m 2000 --kmax-factor 8 --out figure.csv
    wavebem verify [--fast]

Exit codes: 0 success, 1 numeric failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .experiments import (
    CASES,
    ConfigError,
    ExperimentConfig,
    convergence_table,
    parse_grid,
    parse_levels,
    run_convergence,
    run_spectral,
    spectral_table,
    write_csv,
)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_CONFIG = 2

logger = logging.getLogger("wavebem")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavebem", description="Space-time boundary elements for the 1D wave equation.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("convergence", help="error table under uniform refinement")
    conv.add_argument("--case", choices=CASES, default="smooth")
    conv.add_argument("--formulation", choices=("ht", "energetic"), default="ht")
    conv.add_argument("--method", choices=("kernel", "fourier"), default="kernel", help="H_T assembly path")
    conv.add_argument("--L", type=float, default=3.0)
    conv.add_argument("--T", type=float, default=6.0)
    conv.add_argument("--levels", default="3:8", help="inclusive level range a:b")
    conv.add_argument("--out", default="-", help="CSV path, '-' for stdout")

    spect = sub.add_parser("spectral", help="sqrt(lambda_max(C_m)) against the conjectured constant")
    spect.add_argument("--L", type=float, default=1.0)
    spect.add_argument("--T", default="1:8", help="grid a:b[:step], default step 1")
    spect.add_argument("--m", type=int, default=2000)
    spect.add_argument("--kmax-factor", type=int, default=8, help="initial k_max = factor * (m + 1)")
    spect.add_argument("--out", default="-", help="CSV path, '-' for stdout")

    ver = sub.add_parser("verify", help="run the invariant self-checks")
    ver.add_argument("--fast", action="store_true", help="smaller problem sizes")
    return parser


def _config(args) -> ExperimentConfig:
    if args.command == "convergence":
        return ExperimentConfig(
            "convergence",
            case=args.case,
            formulation=args.formulation,
            method=args.method,
            L=args.L,
            T=args.T,
            level_range=parse_levels(args.levels),
            output_path=args.out,
        )
    if args.command == "spectral":
        grid = parse_grid(args.T)
        return ExperimentConfig(
            "spectral",
            L=args.L,
            T=grid[-1],
            T_grid=grid,
            m=args.m,
            kmax_factor=args.kmax_factor,
            output_path=args.out,
        )
    return ExperimentConfig("verify")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"wavebem: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if cfg.command == "convergence":
            write_csv(convergence_table(run_convergence(cfg)), cfg.output_path, sys.stdout)
        elif cfg.command == "spectral":
            write_csv(spectral_table(run_spectral(cfg)), cfg.output_path, sys.stdout)
        else:
            from .verify import run_checks

            results = run_checks(fast=args.fast, echo=print)
            failed = [r for r in results if not r.ok]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed")
            return EXIT_NUMERIC if failed else EXIT_OK
    except ArithmeticError as exc:
        print(f"wavebem: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"wavebem: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

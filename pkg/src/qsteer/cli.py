"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical abort during propagation.
"""

from __future__ import annotations

import argparse
import sys

from .engine import PropagationError
from .runner import (
    ConfigError,
    load_config,
    run_compare,
    run_noise_scan,
    run_simulate,
    run_sweep,
    run_verify,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsteer",
        description=(
            "Dissipative quantum state generation with Lyapunov feedback: "
            "propagate master-equation trajectories, sweep parameters and "
            "verify stationary-state conditions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run one trajectory")
    simulate.add_argument("--config", required=True)
    simulate.add_argument("--out", required=True)

    sweep = sub.add_parser("sweep", help="run a parameter grid")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--jobs", type=int, default=1)

    verify = sub.add_parser("verify", help="check stationary-state conditions")
    verify.add_argument("--config", required=True)
    verify.add_argument("--out", default=None)

    noise = sub.add_parser("noise-scan", help="fidelity vs noise intensity grid")
    noise.add_argument("--config", required=True)
    noise.add_argument("--etas", required=True,
                       help="comma-separated noise intensities")
    noise.add_argument("--out", required=True)

    compare = sub.add_parser(
        "compare-zeno", help="full vs effective model trajectories"
    )
    compare.add_argument("--config", required=True)
    compare.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "simulate":
            _, path = run_simulate(config, args.out)
            print(f"wrote {path}")
        elif args.command == "sweep":
            if args.jobs < 1:
                raise ConfigError("--jobs must be >= 1")
            _, path = run_sweep(config, args.out, jobs=args.jobs)
            print(f"wrote {path}")
        elif args.command == "verify":
            report = run_verify(config, args.out)
            return 0 if report.passed else 1
        elif args.command == "noise-scan":
            try:
                etas = [float(v) for v in args.etas.split(",")]
            except ValueError as exc:
                raise ConfigError(
                    "--etas must be a comma-separated list of numbers"
                ) from exc
            path = run_noise_scan(config, etas, args.out)
            print(f"wrote {path}")
        elif args.command == "compare-zeno":
            result = run_compare(config, args.out)
            print(f"max |dP| over common labels: {result['overall']:.3e}")
    except PropagationError as exc:
        print(f"propagation aborted: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

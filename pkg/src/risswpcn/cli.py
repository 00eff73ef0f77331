"""Experiment command line: one subcommand per experiment, CSV + manifest out."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .experiments import RUNNERS, emit_csv, write_manifest

FAILURE_BUDGET = 0.05


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risswpcn",
        description="Link-level experiments for sensing-assisted wireless powered networks",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--out", type=str, default=".", help="output directory")
        p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
        p.add_argument("--full", action="store_true", help="full-scale geometry")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.full:
        overrides["full"] = True
    try:
        config = load_config(args.config, overrides)
    except (OSError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        print(f"config error: cannot create output directory: {err}", file=sys.stderr)
        return 1

    result = RUNNERS[args.experiment](config)
    emit_csv(result.rows, out_dir / f"{args.experiment}.csv")
    write_manifest(out_dir / "manifest", args.experiment, config)
    if result.failure_fraction > FAILURE_BUDGET:
        print(
            f"{args.experiment}: {result.failures}/{result.cells} design cells failed",
            file=sys.stderr,
        )
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``pottslab <subcommand> [--config FILE] [--set KEY=VALUE]``.

Exit codes: 0 success, 1 runtime error, 2 configuration error, 3 sizing error.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence

from .exc import ConfigError
from .experiments import (
    EXIT_CONFIG,
    EXIT_OK,
    SUBCOMMANDS,
    ExperimentConfig,
    load_config,
    render_config,
    run,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pottslab",
        description="Potts and random-cluster experiments at desk scale.",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging threshold (default: WARNING)",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS + ("show-config",))
    parser.add_argument("--config", help="key=value config file; defaults apply otherwise")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config field, e.g. --set model.beta=0.9 (repeatable)",
    )
    parser.add_argument("--out", help="output directory (overrides output.directory)")
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = list(args.set)
    if args.out is not None:
        overrides.append(f"output.directory = {json.dumps(args.out)}")
    return config.with_overrides(overrides) if overrides else config


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        config = _config(args)
    except ConfigError as exc:
        print(f"pottslab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.subcommand == "show-config":
        sys.stdout.write(render_config(config))
        return EXIT_OK

    outcome = run(args.subcommand, config)
    stream = sys.stdout if outcome.status == EXIT_OK else sys.stderr
    print(outcome.message, file=stream)
    if outcome.directory is not None:
        print(f"artifacts in {outcome.directory}", file=stream)
    return outcome.status

"""``verify``: run the verification suites from the command line."""

import argparse
import logging
import sys
from typing import List, Optional

from .config import ExampleName, GroupName, OutputFormat, Profile, RunConfig, SuiteName
from .exceptions import ConfigError
from .runner import run

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verify",
        description="Numerically verify the van Est map of a strict Lie 2-group.",
    )
    parser.add_argument("--config", help="flat JSON config file; flags override its values")
    parser.add_argument(
        "--suite",
        action="append",
        choices=[suite.value for suite in SuiteName],
        help="suite to run (repeatable; default: all)",
    )
    parser.add_argument("--group", choices=[group.value for group in GroupName])
    parser.add_argument("--example", choices=[example.value for example in ExampleName])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--format", choices=[fmt.value for fmt in OutputFormat])
    parser.add_argument(
        "--profile",
        choices=[profile.value for profile in Profile],
        help="quick smoke run or the full acceptance sample counts",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="log to stderr (-vv for debug)"
    )
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def load_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {
        "suites": args.suite,
        "group": args.group,
        "example": args.example,
        "seed": args.seed,
        "format": args.format,
        "profile": args.profile,
    }
    return base.merged(overrides)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_USAGE
    configure_logging(args.verbose)

    try:
        config = load_config(args)
    except ConfigError as e:
        print(f"verify: {e}", file=sys.stderr)
        return EXIT_USAGE

    report = run(config)
    print(report.emit(config.format.value).rstrip("\n"))
    return EXIT_PASS if report.passed else EXIT_FAIL

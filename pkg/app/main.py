# /eh-feedback-access/app/main.py

"""
Command-line entry point and central assembler.

It is responsible for:
1. Building the argument parser and registering every subcommand from `app.commands`.
2. Configuring logging from the runtime settings before any work starts.
3. Mapping failures to exit codes: 0 success, 1 configuration error,
   2 validation failure (returned by the `validate` command itself).
"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from .commands import (
    dump_config_command,
    eval_command,
    optimize_command,
    simulate_command,
    sweep_command,
    validate_command,
)
from .core.config import get_settings
from .core.exceptions import ConfigError
from .core.logger import configure_logging, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1

# Registration order is the order shown in --help.
COMMANDS = [eval_command, sweep_command, simulate_command, optimize_command, validate_command, dump_config_command]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eh-feedback-access",
        description="Throughput bounds, optimization and simulation of a feedback-aware "
                    "energy-harvesting secondary user.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(get_settings())
    logger.info(f"Running '{args.command}'")
    try:
        code = args.handler(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ValidationError as e:
        logger.error(f"Invalid value: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    logger.info(f"'{args.command}' finished with exit code {code}")
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

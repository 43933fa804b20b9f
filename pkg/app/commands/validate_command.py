# /eh-feedback-access/app/commands/validate_command.py

"""
`validate`: run the oracle suite; exit status 2 when any check fails.
"""

import argparse

from app.core.logger import get_logger
from app.services import report_service, validation_service

from .common import add_config_arguments, add_simulator_arguments, load_config

logger = get_logger(__name__)

EXIT_VALIDATION_FAILED = 2


def register(subparsers) -> None:
    parser = subparsers.add_parser("validate", help="check every closed form against its oracle")
    add_config_arguments(parser)
    add_simulator_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    report = validation_service.run_validate(cfg)
    report_service.write_csv(report_service.validation_records(report), report_service.VALIDATION_COLUMNS, args.out)
    if report.failed:
        logger.error("Validation failed.")
        return EXIT_VALIDATION_FAILED
    return 0

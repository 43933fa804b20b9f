# /eh-feedback-access/app/commands/sweep_command.py

"""
`sweep`: optimized bounds along one parameter axis, one CSV row per point.
"""

import argparse

from app.core.exceptions import ConfigError
from app.services import config_service, report_service, sweep_service

from .common import add_config_arguments, add_optimizer_arguments, load_config


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="optimize along lambda_p, lambda_e, q or D_max")
    add_config_arguments(parser)
    add_optimizer_arguments(parser, pin_help="also run every point with powers pinned at P_max")
    parser.add_argument("--axis", choices=["lambda_p", "lambda_e", "q", "D_max"], help="overrides sweep_axis")
    parser.add_argument("--values", help="comma-separated, strictly increasing; overrides sweep_values")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = config_service.with_overrides(load_config(args), sweep_axis=args.axis, sweep_values=args.values)
    if cfg.sweep_axis is None:
        raise ConfigError("a sweep axis is required", key="sweep_axis")
    try:
        sweep_spec = cfg.sweep_spec(compare_pinned_powers=args.pin_powers)
    except ValueError as e:
        raise ConfigError(str(e), key="sweep_values") from e
    points = sweep_service.sweep(sweep_spec)
    records = [report_service.sweep_record(sweep_spec.axis.value, point) for point in points]
    report_service.write_csv(records, report_service.SWEEP_COLUMNS, args.out)
    return 0

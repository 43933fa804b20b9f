# /eh-feedback-access/app/commands/optimize_command.py

"""
`optimize`: maximize the selected bound(s) for the configured scenario.
"""

import argparse

from app.services import config_service, optimizer_service, report_service

from .common import add_config_arguments, add_optimizer_arguments, load_config


def register(subparsers) -> None:
    parser = subparsers.add_parser("optimize", help="maximize the secondary throughput bound(s)")
    add_config_arguments(parser)
    add_optimizer_arguments(parser, pin_help="fix all secondary powers at P_max")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    if args.pin_powers:
        cfg = config_service.with_overrides(cfg, pin_powers=True)
    records = [
        report_service.optim_record(optimizer_service.maximize(cfg.params, mode, cfg.optim))
        for mode in cfg.mode.bound_modes()
    ]
    report_service.write_csv(records, report_service.OPTIM_COLUMNS, args.out)
    return 0

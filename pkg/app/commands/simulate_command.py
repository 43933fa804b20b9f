# /eh-feedback-access/app/commands/simulate_command.py

"""
`simulate`: slot-level simulation of the configured policy.
"""

import argparse

from app.services import report_service, simulator_service

from .common import add_config_arguments, add_simulator_arguments, load_config


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="simulate the full system slot by slot")
    add_config_arguments(parser)
    add_simulator_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    result = simulator_service.simulate(cfg.params, cfg.policy, cfg.sim)
    report_service.write_csv([report_service.sim_record(result)], report_service.SIM_COLUMNS, args.out)
    return 0

# /eh-feedback-access/app/commands/dump_config_command.py

import argparse
import sys
from pathlib import Path

from app.services import config_service

from .common import add_config_arguments, add_optimizer_arguments, add_simulator_arguments, load_config


def register(subparsers) -> None:
    parser = subparsers.add_parser("dump-config", help="print the effective configuration as a complete file")
    add_config_arguments(parser)
    add_optimizer_arguments(parser, pin_help="set pin_powers in the emitted configuration")
    add_simulator_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    if args.pin_powers:
        cfg = config_service.with_overrides(cfg, pin_powers=True)
    text = config_service.dump_config(cfg)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0

# /eh-feedback-access/app/commands/eval_command.py

"""
`eval`: one throughput report per selected bound for the configured policy.
"""

import argparse
import math

from app.core.logger import get_logger
from app.services import optimizer_service, report_service

from .common import add_config_arguments, load_config

logger = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="evaluate the configured policy under the throughput bound(s)")
    add_config_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    records = []
    for mode in cfg.mode.bound_modes():
        ev = optimizer_service.evaluate(cfg.params, cfg.policy, mode, cfg.optim.eq6_literal)
        if ev.report is None:
            logger.warning(f"{mode.value} bound: primary queue unstable (eta={ev.eta:.6g})")
            record = {"mode": mode.value, "mu_s": 0.0, "eta": ev.eta, "D_p": math.inf, "feasible": False}
            record.update(report_service.policy_record(cfg.policy))
        else:
            record = report_service.report_record(ev.report, cfg.policy, ev.feasible)
        records.append(record)
    report_service.write_csv(records, report_service.EVAL_COLUMNS, args.out)
    return 0

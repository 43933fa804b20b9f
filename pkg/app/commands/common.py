# /eh-feedback-access/app/commands/common.py

"""
Arguments shared by the subcommands and the configuration loading they drive.
"""

import argparse

from app.models.config_model import RunConfig
from app.services import config_service


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="key-value configuration file (baseline values fill the rest)")
    parser.add_argument("--mode", choices=["lower", "upper", "both"], help="throughput bound(s) to use")
    parser.add_argument("--seed", type=int, help="seed for the optimizer and the simulator")
    parser.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    parser.add_argument("--eq6-literal", action="store_true", default=None,
                        help="use the printed power pairing in the throughput terms")


def add_optimizer_arguments(parser: argparse.ArgumentParser, pin_help: str) -> None:
    parser.add_argument("--restarts", type=int, help="multi-start restarts per optimization")
    parser.add_argument("--enforce-power-order", action="store_true", default=None,
                        help="constrain Ps3 <= Ps2 <= Ps1")
    parser.add_argument("--pin-powers", action="store_true", default=False, help=pin_help)


def add_simulator_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--slots", type=int, help="simulated slots (and Monte Carlo draws)")


def load_config(args: argparse.Namespace) -> RunConfig:
    """
    Parse `--config` over the baseline and apply the command-line overrides.

    Raises:
        ConfigError: If the file or an override is invalid.
    """
    cfg = config_service.parse_config(args.config)
    overrides = {
        "mode": getattr(args, "mode", None),
        "seed": getattr(args, "seed", None),
        "eq6_literal": getattr(args, "eq6_literal", None),
        "restarts": getattr(args, "restarts", None),
        "enforce_power_order": getattr(args, "enforce_power_order", None),
    }
    slots = getattr(args, "slots", None)
    if slots is not None:
        overrides["slots"] = slots
        if cfg.sim.warmup >= slots:
            overrides["warmup"] = slots // 10
    return config_service.with_overrides(cfg, **overrides)

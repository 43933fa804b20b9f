# /eh-feedback-access/app/services/config_service.py

"""
Flat key-value configuration files.

A file holds `key = value` lines (blank lines and `#` comments allowed),
parsed with python-dotenv's parser so quoting and inline comments follow its
rules. Keys are the model field names verbatim; any key a file omits takes
its value from the shipped baseline (`app/data/baseline.cfg`).

This module is responsible for:
1. Reading files into a validated `RunConfig`, with line and key diagnostics.
2. Applying command-line overrides through the same validation path.
3. Emitting a complete file (`dump_config`) that re-parses to identical models.
"""

import io
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from dotenv.parser import parse_stream
from pydantic import BaseModel, ValidationError

from app.core.exceptions import ConfigError
from app.core.logger import get_logger
from app.models.config_model import RunConfig
from app.models.optim_model import OptimOptions
from app.models.scenario_model import LinkVariances, Policy, RadioConstants, ScenarioParams, check_policy
from app.models.sim_model import SimConfig

logger = get_logger(__name__)

BASELINE_PATH = Path(__file__).resolve().parent.parent / "data" / "baseline.cfg"

# (section title, sections the key feeds, keys) in dump order
SCHEMA: List[Tuple[str, Tuple[str, ...], Tuple[str, ...]]] = [
    ("Scenario", ("params",), ("lambda_p", "lambda_e", "q", "P_p", "P_MD", "P_FA", "P_max", "D_max")),
    ("Radio constants", ("consts",), ("beta", "T", "tau", "W", "N0")),
    ("Fading powers", ("links",), ("var_p_dp", "var_p_ds", "var_s_dp", "var_s_ds")),
    ("Policy", ("policy",), ("alpha_s", "alpha_f", "alpha_t", "alpha_b", "alpha_r", "Ps1", "Ps2", "Ps3")),
    ("Optimizer", ("optim",), ("restarts", "max_iters", "tol", "enforce_power_order", "eq6_literal",
                               "penalty_weight", "pin_powers", "feasibility_samples")),
    ("Seed (optimizer and simulator)", ("optim", "sim"), ("seed",)),
    ("Simulator", ("sim",), ("slots", "warmup", "batches", "force_availability", "initial_energy")),
    ("Run", ("run",), ("mode", "sweep_axis", "sweep_values", "sweep_cross_seed")),
]

KEY_SECTIONS: Dict[str, Tuple[str, ...]] = {key: sections for _, sections, keys in SCHEMA for key in keys}
KEY_ORDER: List[str] = [key for _, _, keys in SCHEMA for key in keys]

Source = Union[str, Path, io.TextIOBase]


# --- Reading ---

def _binding_line(original) -> int:
    # the parser marks a binding at the start of any blank lines that precede it
    text = original.string
    leading = text[: len(text) - len(text.lstrip())]
    return original.line + leading.count("\n")


def read_bindings(stream: Iterable[str]) -> Tuple[Dict[str, str], Dict[str, int]]:
    """
    Parse a key-value stream.

    Returns:
        (values by key, line number by key).

    Raises:
        ConfigError: On malformed lines, unknown or repeated keys, or keys without a value.
    """
    values: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for binding in parse_stream(stream):
        line = _binding_line(binding.original)
        if binding.error:
            raise ConfigError(f"malformed line {binding.original.string.strip()!r}", line=line)
        if binding.key is None:
            continue
        key = binding.key
        if key not in KEY_SECTIONS:
            raise ConfigError("unknown key", key=key, line=line)
        if key in values:
            raise ConfigError(f"repeated key (first set on line {lines[key]})", key=key, line=line)
        if binding.value is None:
            raise ConfigError("missing value", key=key, line=line)
        values[key] = binding.value
        lines[key] = line
    return values, lines


def _read_file(path: Union[str, Path]) -> Tuple[Dict[str, str], Dict[str, int]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return read_bindings(f)
    except OSError as e:
        raise ConfigError(f"cannot read configuration file {path}: {e.strerror}") from e


# --- Validation ---

def _split_list(value: Any) -> List[Any]:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return list(value)


def _none_if_blank(value: Any) -> Any:
    if isinstance(value, str) and value.strip().lower() in ("", "none"):
        return None
    return value


def _build(model: type, data: Dict[str, Any], lines: Dict[str, int]) -> BaseModel:
    try:
        return model(**data)
    except ValidationError as e:
        err = e.errors()[0]
        key = str(err["loc"][0]) if err["loc"] else None
        if key not in KEY_SECTIONS:
            key = None
        raise ConfigError(err["msg"], key=key, line=lines.get(key) if key else None) from e


def from_flat(values: Dict[str, Any], lines: Optional[Dict[str, int]] = None) -> RunConfig:
    """
    Validate a complete flat mapping into a `RunConfig`.

    Raises:
        ConfigError: Naming the offending key (and line when known).
    """
    lines = lines or {}
    sections: Dict[str, Dict[str, Any]] = {}
    for key, value in values.items():
        for section in KEY_SECTIONS[key]:
            sections.setdefault(section, {})[key] = value

    consts = _build(RadioConstants, sections.get("consts", {}), lines)
    links = _build(LinkVariances, sections.get("links", {}), lines)
    params = _build(ScenarioParams, {**sections.get("params", {}), "consts": consts, "links": links}, lines)
    policy = _build(Policy, sections.get("policy", {}), lines)
    try:
        check_policy(params, policy)
    except ValueError as e:
        key = next(n for n in ("Ps1", "Ps2", "Ps3") if getattr(policy, n) > params.P_max)
        raise ConfigError(str(e), key=key, line=lines.get(key)) from e
    optim = _build(OptimOptions, sections.get("optim", {}), lines)
    sim = _build(SimConfig, sections.get("sim", {}), lines)

    run = dict(sections.get("run", {}))
    if "sweep_axis" in run:
        run["sweep_axis"] = _none_if_blank(run["sweep_axis"])
    if "sweep_values" in run:
        run["sweep_values"] = _split_list(run["sweep_values"])
    return _build(RunConfig, {**run, "params": params, "policy": policy, "optim": optim, "sim": sim}, lines)


def parse_config(source: Optional[Source] = None) -> RunConfig:
    """
    Load a configuration on top of the shipped baseline.

    Args:
        source: A path, an open text stream, or None for the baseline alone.

    Raises:
        ConfigError: If the file cannot be read, parsed or validated.
    """
    values, _ = _read_file(BASELINE_PATH)
    lines: Dict[str, int] = {}
    if source is not None:
        if isinstance(source, (str, Path)):
            user_values, lines = _read_file(source)
        else:
            user_values, lines = read_bindings(source)
        values.update(user_values)
        logger.debug(f"configuration sets {len(user_values)} keys over the baseline")
    return from_flat(values, lines)


def default_config() -> RunConfig:
    return parse_config(None)


# --- Overrides and emission ---

def to_flat(cfg: RunConfig) -> Dict[str, Any]:
    """Every configuration key with its typed value, in dump order."""
    sources = {
        "params": cfg.params,
        "consts": cfg.params.consts,
        "links": cfg.params.links,
        "policy": cfg.policy,
        "optim": cfg.optim,
        "sim": cfg.sim,
        "run": cfg,
    }
    return {key: getattr(sources[KEY_SECTIONS[key][0]], key) for key in KEY_ORDER}


def with_overrides(cfg: RunConfig, **overrides: Any) -> RunConfig:
    """
    Re-validate a configuration with some keys replaced; None values are ignored.

    Raises:
        ConfigError: If an override breaks an invariant.
    """
    for key in overrides:
        if key not in KEY_SECTIONS:
            raise ConfigError("unknown key", key=key)
    values = to_flat(cfg)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return from_flat(values)


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def dump_config(cfg: RunConfig) -> str:
    """Render a configuration as a complete key-value file."""
    flat = to_flat(cfg)
    out = ["# eh-feedback-access configuration", ""]
    for title, _, keys in SCHEMA:
        out.append(f"# {title}")
        out.extend(f"{key} = {format_value(flat[key])}" for key in keys)
        out.append("")
    return "\n".join(out)

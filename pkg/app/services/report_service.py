# /eh-feedback-access/app/services/report_service.py

"""
Flat records and CSV emission for every command's output.

Column orders are fixed module constants; a header is always written and
floats carry `csv_significant_digits` significant digits (12 by default).
"""

import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

import pandas as pd

from app.core.config import get_settings
from app.models.analysis_model import ThroughputReport
from app.models.optim_model import OptimResult
from app.models.scenario_model import Policy
from app.models.sim_model import SimResult
from app.models.sweep_model import SweepPoint
from app.models.validation_model import ValidationReport

POLICY_COLUMNS = ["alpha_s", "alpha_f", "alpha_t", "alpha_b", "alpha_r", "Ps1", "Ps2", "Ps3"]
REPORT_COLUMNS = ["mode", "mu_s", "eta", "pi0", "Pavail", "D_p", "omega_p", "gamma_p", "feasible"]
EVAL_COLUMNS = REPORT_COLUMNS + POLICY_COLUMNS
SWEEP_COLUMNS = ["axis", "value", "mode", "pinned", "mu_s", "eta", "pi0", "Pavail", "D_p", "feasible"] + POLICY_COLUMNS
OPTIM_COLUMNS = REPORT_COLUMNS + ["restarts_converged", "feasible_restarts"] + POLICY_COLUMNS
SIM_ESTIMATES = ["mu_s_hat", "D_p_hat", "pi0_hat", "mu_e_hat", "energy_outage_rate"]
SIM_COLUMNS = (
    [f"{name}{suffix}" for name in SIM_ESTIMATES for suffix in ("", "_se")]
    + ["lambda_p_hat", "slots_measured", "energy_harvested", "energy_spent_from_battery",
       "energy_initial", "energy_final", "phase_belief_mismatches"]
)
VALIDATION_COLUMNS = ["name", "estimate", "reference", "tolerance", "std_error", "verdict", "detail"]

Destination = Union[None, str, Path, TextIO]


def policy_record(policy: Policy) -> Dict:
    return {name: getattr(policy, name) for name in POLICY_COLUMNS}


def report_record(report: ThroughputReport, policy: Policy, feasible: bool) -> Dict:
    """One eval row: the bound's report, its feasibility and the evaluated policy."""
    record = {
        "mode": report.mode.value,
        "mu_s": report.mu_s,
        "eta": report.eta,
        "pi0": report.pi0,
        "Pavail": report.Pavail,
        "D_p": report.D_p,
        "omega_p": report.omega_p,
        "gamma_p": report.gamma_p,
        "feasible": feasible,
    }
    record.update(policy_record(policy))
    return record


def optim_record(result: OptimResult) -> Dict:
    record = report_record(result.report, result.best_policy, result.feasible)
    record["restarts_converged"] = result.restarts_converged
    record["feasible_restarts"] = result.feasible_restarts
    return record


def sweep_record(axis: str, point: SweepPoint) -> Dict:
    report = point.result.report
    record = {
        "axis": axis,
        "value": point.axis_value,
        "mode": point.mode.value,
        "pinned": point.pinned,
        "mu_s": report.mu_s,
        "eta": report.eta,
        "pi0": report.pi0,
        "Pavail": report.Pavail,
        "D_p": report.D_p,
        "feasible": point.result.feasible,
    }
    record.update(policy_record(point.result.best_policy))
    return record


def sim_record(result: SimResult) -> Dict:
    record = {}
    for name in SIM_ESTIMATES:
        estimate = getattr(result, name)
        record[name] = estimate.value
        record[f"{name}_se"] = estimate.std_error
    for name in SIM_COLUMNS[2 * len(SIM_ESTIMATES):]:
        record[name] = getattr(result, name)
    return record


def validation_records(report: ValidationReport) -> List[Dict]:
    return [
        {**check.model_dump(include=set(VALIDATION_COLUMNS)), "verdict": check.verdict.value}
        for check in report.checks
    ]


def to_frame(records: Iterable[Dict], columns: List[str]) -> pd.DataFrame:
    return pd.DataFrame(list(records), columns=columns)


def write_csv(records: Iterable[Dict], columns: List[str], destination: Destination = None) -> str:
    """
    Serialize records in a fixed column order.

    Args:
        records: Row dictionaries; missing columns are left empty.
        columns: Column order (also the header).
        destination: A path, an open text stream, or None for stdout.

    Returns:
        The CSV text that was written.
    """
    digits = get_settings().csv_significant_digits
    text = to_frame(records, columns).to_csv(index=False, float_format=f"%.{digits}g", lineterminator="\n")
    if destination is None:
        sys.stdout.write(text)
    elif isinstance(destination, (str, Path)):
        Path(destination).write_text(text, encoding="utf-8")
    else:
        destination.write(text)
    return text

# /eh-feedback-access/app/models/optim_model.py

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .analysis_model import ThroughputReport
from .scenario_model import Policy


class OptimOptions(BaseModel):
    model_config = ConfigDict(frozen=True)
    restarts: int = Field(default=64, ge=1)
    max_iters: int = Field(default=600, ge=1, description="Nelder-Mead iterations per restart.")
    tol: float = Field(default=1e-6, gt=0)
    seed: int = Field(default=1, ge=0)
    enforce_power_order: bool = False
    eq6_literal: bool = False
    penalty_weight: float = Field(default=10.0, gt=0)
    pin_powers: bool = Field(default=False, description="Fix Ps1 = Ps2 = Ps3 = P_max and optimize the probabilities only.")
    feasibility_samples: int = Field(default=10_000, ge=0)
    keep_history: bool = False
    initial_policies: List[Policy] = Field(default_factory=list)


class Evaluation(BaseModel):
    model_config = ConfigDict(frozen=True)
    mu_s: float
    eta: float
    D_p: float
    feasible: bool
    report: Optional[ThroughputReport] = None


class OptimResult(BaseModel):
    model_config = ConfigDict(frozen=True)
    best_policy: Policy
    report: ThroughputReport
    feasible: bool
    restarts_converged: int
    feasible_restarts: int = 0
    objective_history: Optional[List[float]] = None

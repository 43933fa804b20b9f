# /eh-feedback-access/app/models/sweep_model.py

from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .analysis_model import BoundMode
from .optim_model import OptimOptions, OptimResult
from .scenario_model import ScenarioParams


class SweepAxis(str, Enum):
    LAMBDA_P = "lambda_p"
    LAMBDA_E = "lambda_e"
    Q = "q"
    D_MAX = "D_max"


class SweepMode(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    BOTH = "both"

    def bound_modes(self) -> List[BoundMode]:
        if self is SweepMode.BOTH:
            return [BoundMode.LOWER, BoundMode.UPPER]
        return [BoundMode(self.value)]


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)
    axis: SweepAxis
    values: List[float] = Field(..., min_length=1)
    mode: SweepMode = SweepMode.BOTH
    fixed: ScenarioParams = Field(default_factory=ScenarioParams)
    optim: OptimOptions = Field(default_factory=OptimOptions)
    compare_pinned_powers: bool = False
    cross_seed: bool = True

    @field_validator("values")
    @classmethod
    def values_must_increase(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("Sweep values must be strictly increasing.")
        return v


class SweepPoint(BaseModel):
    model_config = ConfigDict(frozen=True)
    axis_value: float
    mode: BoundMode
    pinned: bool
    result: OptimResult

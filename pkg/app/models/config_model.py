# /eh-feedback-access/app/models/config_model.py

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .optim_model import OptimOptions
from .scenario_model import Policy, ScenarioParams
from .sim_model import SimConfig
from .sweep_model import SweepAxis, SweepMode, SweepSpec


class RunConfig(BaseModel):
    """Everything one configuration file describes."""
    model_config = ConfigDict(frozen=True)
    params: ScenarioParams = Field(default_factory=ScenarioParams)
    policy: Policy = Field(default_factory=Policy)
    optim: OptimOptions = Field(default_factory=OptimOptions)
    sim: SimConfig = Field(default_factory=SimConfig)
    mode: SweepMode = SweepMode.LOWER
    sweep_axis: Optional[SweepAxis] = None
    sweep_values: List[float] = Field(default_factory=list)
    sweep_cross_seed: bool = True

    def sweep_spec(self, compare_pinned_powers: bool = False) -> SweepSpec:
        """Sweep description; raises ValueError when no sweep axis is configured."""
        if self.sweep_axis is None:
            raise ValueError("No sweep_axis configured.")
        return SweepSpec(
            axis=self.sweep_axis,
            values=self.sweep_values,
            mode=self.mode,
            fixed=self.params,
            optim=self.optim,
            compare_pinned_powers=compare_pinned_powers,
            cross_seed=self.sweep_cross_seed,
        )

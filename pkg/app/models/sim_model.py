# /eh-feedback-access/app/models/sim_model.py

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ForcedAvailability(str, Enum):
    OFF = "off"        # the battery decides
    ALWAYS = "always"  # transmissions are powered externally; the battery is bypassed
    NEVER = "never"    # every intended transmission is aborted


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True)
    slots: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=1, ge=0)
    warmup: int = Field(default=10_000, ge=0)
    force_availability: ForcedAvailability = ForcedAvailability.OFF
    batches: int = Field(default=20, ge=2, description="Batch count for batch-means standard errors.")
    initial_energy: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def warmup_must_leave_slots(self):
        if not self.slots > self.warmup:
            raise ValueError(f"slots ({self.slots}) must exceed warmup ({self.warmup}).")
        return self


class Estimate(BaseModel):
    model_config = ConfigDict(frozen=True)
    value: float
    std_error: float
    samples: int


class SimResult(BaseModel):
    model_config = ConfigDict(frozen=True)
    mu_s_hat: Estimate
    D_p_hat: Estimate
    pi0_hat: Estimate
    mu_e_hat: Estimate
    energy_outage_rate: Estimate
    lambda_p_hat: float
    slots_measured: int
    # Energy ledger over the whole run (warmup included).
    energy_harvested: float
    energy_spent_from_battery: float
    energy_initial: float
    energy_final: float
    phase_belief_mismatches: int = Field(..., description="Retransmission slots the SU did not recognise.")

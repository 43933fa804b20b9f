# /eh-feedback-access/app/models/scenario_model.py

"""
Exogenous model constants and the secondary user's decision variables.

All models are immutable pydantic values; invariants that involve a single
model are enforced at construction, cross-model checks (a policy's powers
against a scenario's power cap) live in `check_policy`.
"""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator


class RadioConstants(BaseModel):
    model_config = ConfigDict(frozen=True)
    beta: float = Field(default=10.0, ge=0, description="Payload size, bits.")
    T: float = Field(default=1.0, gt=0, description="Slot duration, seconds.")
    tau: float = Field(default=0.3, gt=0, description="Sensing duration, seconds.")
    W: float = Field(default=8.0, gt=0, description="Bandwidth, Hz.")
    N0: float = Field(default=1.0, gt=0, description="Noise power spectral density, Watts/Hz.")

    @model_validator(mode="after")
    def sensing_must_fit_in_slot(self):
        if not self.tau < self.T:
            raise ValueError(f"tau ({self.tau}) must be shorter than the slot duration T ({self.T}).")
        return self

    @property
    def T_s(self) -> float:
        """Transmission time left after sensing."""
        return self.T - self.tau


class LinkVariances(BaseModel):
    """Rayleigh fading powers sigma^2 for each (transmitter, receiver) pair."""
    model_config = ConfigDict(frozen=True)
    var_p_dp: float = Field(default=1.0, gt=0)
    var_p_ds: float = Field(default=1.0, gt=0)
    var_s_dp: float = Field(default=1.0, gt=0)
    var_s_ds: float = Field(default=1.0, gt=0)


class ScenarioParams(BaseModel):
    model_config = ConfigDict(frozen=True)
    lambda_p: float = Field(default=0.2, ge=0, lt=1, description="Primary arrival probability per slot.")
    lambda_e: float = Field(default=20.0, ge=0, description="Mean energy units harvested per slot.")
    q: float = Field(default=0.5, ge=0, le=1, description="Probability the SU decodes primary feedback.")
    P_p: float = Field(default=20.0, gt=0, description="Primary transmit power, Watts.")
    P_MD: float = Field(default=0.3, ge=0, le=1)
    P_FA: float = Field(default=0.3, ge=0, le=1)
    P_max: float = Field(default=32.0, gt=0, description="Secondary power cap, Watts.")
    D_max: float = Field(default=10.0, ge=1, description="Primary delay threshold, slots.")
    consts: RadioConstants = Field(default_factory=RadioConstants)
    links: LinkVariances = Field(default_factory=LinkVariances)


class Policy(BaseModel):
    model_config = ConfigDict(frozen=True)
    alpha_s: float = Field(default=0.0, ge=0, le=1)
    alpha_f: float = Field(default=0.0, ge=0, le=1)
    alpha_t: float = Field(default=0.0, ge=0, le=1)
    alpha_b: float = Field(default=0.0, ge=0, le=1)
    alpha_r: float = Field(default=0.0, ge=0, le=1)
    Ps1: float = Field(default=0.0, ge=0)
    Ps2: float = Field(default=0.0, ge=0)
    Ps3: float = Field(default=0.0, ge=0)

    @classmethod
    def silent(cls) -> "Policy":
        """The policy of a secondary user that never accesses the channel."""
        return cls()

    @property
    def is_silent(self) -> bool:
        return self.alpha_s == 0 and self.alpha_t == 0 and self.alpha_r == 0

    def as_list(self) -> List[float]:
        return [self.alpha_s, self.alpha_f, self.alpha_t, self.alpha_b, self.alpha_r,
                self.Ps1, self.Ps2, self.Ps3]


def check_policy(params: ScenarioParams, policy: Policy) -> None:
    """
    Verify the cross-model invariant that every secondary power respects P_max.

    Raises:
        ValueError: If any of Ps1, Ps2, Ps3 exceeds the scenario's power cap.
    """
    for name in ("Ps1", "Ps2", "Ps3"):
        value = getattr(policy, name)
        if value > params.P_max:
            raise ValueError(f"{name}={value} exceeds P_max={params.P_max}.")

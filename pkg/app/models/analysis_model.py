# /eh-feedback-access/app/models/analysis_model.py

"""
Value types produced by the analytical services: primary success rates, the
primary queue's steady state, and the throughput report for one bound.
"""

from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class BoundMode(str, Enum):
    LOWER = "lower"
    UPPER = "upper"


class SuccessRates(BaseModel):
    model_config = ConfigDict(frozen=True)
    gamma: float = Field(..., ge=0, le=1)
    omega_p: float = Field(..., ge=0, le=1)
    gamma_p: float = Field(..., ge=0, le=1)


class SteadyState(BaseModel):
    """
    Closed-form stationary distribution of the primary queue's two-phase chain.

    Level k >= 1 is split into a first-transmission state (pi_k) and a
    retransmission state (chi_k). Construct it through
    `queueing_service.steady_state`, which checks stability.
    """
    model_config = ConfigDict(frozen=True)
    lambda_p: float
    omega_p: float
    gamma_p: float
    eta: float
    pi0: float

    @property
    def ratio(self) -> float:
        """Geometric ratio of the k >= 2 levels; below 1 whenever the queue is stable."""
        return self.lambda_p * (1 - self.eta) / ((1 - self.lambda_p) * self.eta)

    @property
    def sum_pi(self) -> float:
        return self.pi0 * self.lambda_p * self.gamma_p / (self.eta - self.lambda_p)

    @property
    def sum_chi(self) -> float:
        return self.pi0 * self.lambda_p * (1 - self.omega_p) / (self.eta - self.lambda_p)

    def _level_base(self) -> float:
        return self.lambda_p / ((1 - self.lambda_p) * self.eta)

    def pi_k(self, k: int) -> float:
        lam, eta = self.lambda_p, self.eta
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k == 0:
            return self.pi0
        if k == 1:
            return self.pi0 * lam * (lam + (1 - lam) * self.gamma_p) / ((1 - lam) * eta)
        return self.pi0 * lam * (1 - self.omega_p) * self._level_base() ** 2 * self.ratio ** (k - 2)

    def chi_k(self, k: int) -> float:
        lam, eta = self.lambda_p, self.eta
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k == 0:
            return 0.0
        if k == 1:
            return self.pi0 * lam * (1 - self.omega_p) / eta
        return self.pi0 * (1 - lam) * (1 - self.omega_p) * self._level_base() ** 2 * self.ratio ** (k - 2)

    def state_probabilities(self, max_level: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Vectorized pi_k and chi_k for k = 0..max_level.

        Returns:
            Two arrays of length max_level + 1 (pi, chi).
        """
        k = np.arange(max_level + 1, dtype=float)
        lam = self.lambda_p
        # base^2 * ratio^(k-2): finite for every stable triple, including eta -> 1
        tail = (1 - self.omega_p) * self._level_base() ** 2 * np.power(self.ratio, np.maximum(k - 2, 0))
        pi = self.pi0 * lam * tail
        chi = self.pi0 * (1 - lam) * tail
        pi[0] = self.pi0
        chi[0] = 0.0
        if max_level >= 1:
            pi[1] = self.pi_k(1)
            chi[1] = self.chi_k(1)
        return pi, chi


class ThroughputReport(BaseModel):
    model_config = ConfigDict(frozen=True)
    mu_s: float = Field(..., ge=0, le=1, description="Secondary packets delivered per slot.")
    eta: float
    pi0: float
    Pavail: float = Field(..., ge=0, le=1)
    D_p: float = Field(..., description="Mean primary delay, slots; +inf when unstable.")
    mode: BoundMode
    omega_p: float
    gamma_p: float

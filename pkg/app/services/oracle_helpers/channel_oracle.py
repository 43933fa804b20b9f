# /eh-feedback-access/app/services/oracle_helpers/channel_oracle.py

"""
Monte Carlo outage estimator for one link, independent of the closed form.

Draws exponential channel gains for the intended and the interfering
transmitter and compares the achieved Shannon rate with the required rate.
"""

import math
from typing import Tuple

import numpy as np

from app.models.scenario_model import RadioConstants


def outage_monte_carlo(
    i: int,
    P_A: float,
    P_B: float,
    var_Ad: float,
    var_Bd: float,
    consts: RadioConstants,
    samples: int = 1_000_000,
    seed: int = 1,
) -> Tuple[float, float]:
    """
    Estimate the success probability of a link by sampling fading gains.

    Returns:
        (estimate, binomial standard error).
    """
    rng = np.random.default_rng(seed)
    h_A = rng.exponential(var_Ad, samples)
    h_B = rng.exponential(var_Bd, samples)
    required = consts.beta / (consts.T - i * consts.tau)
    sinr = P_A * h_A / (consts.N0 * consts.W + P_B * h_B)
    achieved = consts.W * np.log2(1.0 + sinr)
    p = float(np.mean(achieved > required))
    return p, math.sqrt(max(p * (1 - p), 0.0) / samples)

# /eh-feedback-access/app/services/queueing_service.py

"""
The primary user's queue as a two-phase Markov chain.

This module is responsible for:
1. The primary success probabilities per slot: gamma (secondary behaving as in a
   first transmission), Omega_p (first-transmission states) and Gamma_p
   (retransmission states), each mixing over the secondary's battery availability.
2. The closed-form steady state of the chain, including the stability test.
3. The mean primary packet delay by Little's law.

Infinite sums are never truncated here except in the eta = 1 delay fallback.
"""

import numpy as np

from app.core.exceptions import UnstableQueueError
from app.core.logger import get_logger
from app.models.analysis_model import SteadyState, SuccessRates
from app.models.scenario_model import Policy, ScenarioParams

from .channel_service import primary_success

logger = get_logger(__name__)

# lambda_p < eta is classified as lambda_p <= eta - STABILITY_MARGIN
STABILITY_MARGIN = 1e-9
_SERIES_TAIL = 1e-12
_SERIES_MAX_LEVEL = 1_000_000


def _p0(params: ScenarioParams, P_s: float) -> float:
    return primary_success(params.P_p, P_s, params.consts, params.links)


def compute_gamma(params: ScenarioParams, policy: Policy, Pavail: float = 1.0) -> float:
    """
    Primary success probability while the secondary behaves as in a first-transmission slot.

    `Pavail` is accepted for symmetry with the other rates and does not enter gamma.
    """
    p_idle = _p0(params, 0.0)
    p_unsensed = _p0(params, policy.Ps1)
    p_busy_sensed = _p0(params, policy.Ps2)
    a_s, P_MD = policy.alpha_s, params.P_MD
    return (
        (1 - a_s) * (policy.alpha_t * p_unsensed + (1 - policy.alpha_t) * p_idle)
        + a_s * P_MD * (policy.alpha_f * p_unsensed + (1 - policy.alpha_f) * p_idle)
        + a_s * (1 - P_MD) * (policy.alpha_b * p_busy_sensed + (1 - policy.alpha_b) * p_idle)
    )


def compute_omega_p(params: ScenarioParams, policy: Policy, Pavail: float) -> float:
    """Omega_p: success probability of a first transmission."""
    return Pavail * compute_gamma(params, policy) + (1 - Pavail) * _p0(params, 0.0)


def compute_gamma_p(params: ScenarioParams, policy: Policy, Pavail: float) -> float:
    """Gamma_p: success probability of a retransmission."""
    p_idle = _p0(params, 0.0)
    after_nack = policy.alpha_r * _p0(params, policy.Ps3) + (1 - policy.alpha_r) * p_idle
    with_energy = params.q * after_nack + (1 - params.q) * compute_gamma(params, policy)
    return Pavail * with_energy + (1 - Pavail) * p_idle


def service_probabilities(params: ScenarioParams, policy: Policy, Pavail: float) -> SuccessRates:
    """Bundle gamma, Omega_p and Gamma_p for one availability level."""
    return SuccessRates(
        gamma=compute_gamma(params, policy),
        omega_p=compute_omega_p(params, policy, Pavail),
        gamma_p=compute_gamma_p(params, policy, Pavail),
    )


def steady_state(lambda_p: float, omega_p: float, gamma_p: float) -> SteadyState:
    """
    Solve the primary chain in closed form.

    Args:
        lambda_p: Bernoulli arrival probability per slot.
        omega_p: Service probability in first-transmission states.
        gamma_p: Service probability in retransmission states.

    Returns:
        The stationary distribution as a `SteadyState`.

    Raises:
        UnstableQueueError: If lambda_p > eta - STABILITY_MARGIN.
    """
    eta = lambda_p * omega_p + (1 - lambda_p) * gamma_p
    if lambda_p > eta - STABILITY_MARGIN:
        raise UnstableQueueError(lambda_p, eta)
    pi0 = (eta - lambda_p) / gamma_p
    return SteadyState(lambda_p=lambda_p, omega_p=omega_p, gamma_p=gamma_p, eta=eta, pi0=pi0)


def _series_delay(ss: SteadyState) -> float:
    # sum k (pi_k + chi_k) / lambda_p over levels until the geometric tail is negligible
    ratio = ss.ratio
    max_level = 2
    while ratio ** max_level > _SERIES_TAIL and max_level < _SERIES_MAX_LEVEL:
        max_level *= 2
    pi, chi = ss.state_probabilities(max_level)
    occupancy = np.arange(max_level + 1) @ (pi + chi)
    return float(occupancy / ss.lambda_p)


def mean_delay(ss: SteadyState) -> float:
    """
    Mean time a primary packet spends in the system, in slots (Little's law).

    Args:
        ss: A stable steady state.

    Returns:
        The closed-form mean delay. At lambda_p = 0 this is the delay of a lone
        packet, (1 + Gamma_p - Omega_p) / Gamma_p; at eta = 1 the truncated series is used.
    """
    lam, omega, gamma, eta = ss.lambda_p, ss.omega_p, ss.gamma_p, ss.eta
    if lam == 0.0:
        return (1 + gamma - omega) / gamma
    if eta >= 1.0:
        logger.debug("eta == 1, falling back to series delay")
        return _series_delay(ss)
    numerator = (omega - eta) * (eta - lam) ** 2 + (1 - lam) ** 2 * (1 - omega) * eta
    denominator = (eta - lam) * (1 - lam) * (1 - eta) * gamma
    return numerator / denominator

# /eh-feedback-access/app/services/energy_service.py

"""
The secondary user's battery.

`availability_prob` is the M/D/1 surrogate for the probability that the
battery can power a transmission, under the lower-bound (fastest drain) or
upper-bound (slowest drain) assumption. `energy_service_rate` is the exact
mean drain per slot given the primary queue's steady state; it does not feed
the bounds and serves diagnostics and simulator cross-checks.

One energy unit is one Joule; lambda_e is the mean number of units harvested per slot.
"""

from app.core.exceptions import ZeroDrainError
from app.models.analysis_model import BoundMode, SteadyState
from app.models.scenario_model import Policy, ScenarioParams


def transmission_drain(mode: BoundMode, params: ScenarioParams, policy: Policy) -> float:
    """Energy per secondary transmission assumed by the selected bound."""
    consts = params.consts
    if mode is BoundMode.LOWER:
        return policy.Ps1 * consts.T
    return min(policy.Ps2 * consts.T_s, policy.Ps3 * consts.T)


def availability_prob(mode: BoundMode, params: ScenarioParams, policy: Policy) -> float:
    """
    Probability that the battery holds enough energy for one transmission.

    Args:
        mode: LOWER drains Ps1*T per transmission; UPPER drains min(Ps2*(T - tau), Ps3*T).
        params: Scenario constants (lambda_e, slot timing).
        policy: Secondary powers.

    Returns:
        min(1, lambda_e / drain).

    Raises:
        ZeroDrainError: If the drain for the selected mode is zero.
    """
    drain = transmission_drain(mode, params, policy)
    if drain <= 0.0:
        raise ZeroDrainError(mode.value, drain)
    return min(1.0, params.lambda_e / drain)


def energy_service_rate(params: ScenarioParams, policy: Policy, ss: SteadyState) -> float:
    """
    Mean energy drained from the battery per slot when energy is never short.

    Args:
        params: Scenario constants.
        policy: Secondary access policy.
        ss: Steady state of the primary queue.

    Returns:
        Energy units per slot, weighted over the empty, first-transmission and
        retransmission states.
    """
    T, T_s = params.consts.T, params.consts.T_s
    a_s, a_t = policy.alpha_s, policy.alpha_t
    unsensed = (1 - a_s) * a_t * policy.Ps1 * T

    idle = unsensed + a_s * (
        policy.alpha_f * (1 - params.P_FA) * policy.Ps1 + policy.alpha_b * params.P_FA * policy.Ps2
    ) * T_s
    busy = unsensed + a_s * (
        policy.alpha_f * params.P_MD * policy.Ps1 + policy.alpha_b * (1 - params.P_MD) * policy.Ps2
    ) * T_s
    retransmission = params.q * policy.alpha_r * policy.Ps3 * T + (1 - params.q) * busy

    return ss.pi0 * idle + ss.sum_pi * busy + ss.sum_chi * retransmission

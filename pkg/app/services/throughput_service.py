# /eh-feedback-access/app/services/throughput_service.py

"""
Secondary throughput and its decoupled lower/upper bounds.

The secondary's per-slot success depends on the primary queue's state:
empty (no interference, false alarms possible), first transmission (primary
interferes, miss-detections possible) or retransmission (the secondary may have
decoded the NACK). `secondary_throughput` weights those three per-state success
probabilities by the steady state and scales by the battery availability.

`throughput_bound` composes the queueing and energy services into one bound:
LOWER assumes the secondary always interferes and drains Ps1*T per
transmission; UPPER assumes it never interferes and drains
min(Ps2*(T - tau), Ps3*T).

With `eq6_literal` the busy-sensed branches use Ps3 and the post-NACK branch
uses Ps2, reproducing the printed formula instead of the access protocol.
"""

from typing import Tuple

from app.core.exceptions import UnstableQueueError, ZeroDrainError
from app.core.logger import get_logger
from app.models.analysis_model import BoundMode, SteadyState, ThroughputReport
from app.models.scenario_model import Policy, ScenarioParams

from . import energy_service, queueing_service
from .channel_service import secondary_success

logger = get_logger(__name__)


def state_success(
    params: ScenarioParams, policy: Policy, eq6_literal: bool = False
) -> Tuple[float, float, float]:
    """
    Secondary success probability per slot in each primary state, energy permitting.

    Returns:
        (empty queue, first transmission, retransmission).
    """
    consts, links, P_p = params.consts, params.links, params.P_p
    busy_power = policy.Ps3 if eq6_literal else policy.Ps2
    nack_power = policy.Ps2 if eq6_literal else policy.Ps3
    a_s, a_t, a_f, a_b = policy.alpha_s, policy.alpha_t, policy.alpha_f, policy.alpha_b

    idle = (1 - a_s) * a_t * secondary_success(0, policy.Ps1, 0.0, consts, links) + a_s * (
        a_f * (1 - params.P_FA) * secondary_success(1, policy.Ps1, 0.0, consts, links)
        + a_b * params.P_FA * secondary_success(1, busy_power, 0.0, consts, links)
    )
    busy = (1 - a_s) * a_t * secondary_success(0, policy.Ps1, P_p, consts, links) + a_s * (
        a_f * params.P_MD * secondary_success(1, policy.Ps1, P_p, consts, links)
        + a_b * (1 - params.P_MD) * secondary_success(1, busy_power, P_p, consts, links)
    )
    retransmission = (
        params.q * policy.alpha_r * secondary_success(0, nack_power, P_p, consts, links)
        + (1 - params.q) * busy
    )
    return idle, busy, retransmission


def secondary_throughput(
    params: ScenarioParams,
    policy: Policy,
    Pavail: float,
    ss: SteadyState,
    eq6_literal: bool = False,
) -> float:
    """
    Secondary packets delivered per slot.

    Args:
        params: Scenario constants.
        policy: Secondary access policy.
        Pavail: Probability the battery can power a transmission.
        ss: Steady state of the primary queue.
        eq6_literal: Use the printed power pairing instead of the protocol's.

    Returns:
        Pavail * (pi0 * idle + sum_pi * busy + sum_chi * retransmission).
    """
    idle, busy, retransmission = state_success(params, policy, eq6_literal)
    mu_s = Pavail * (ss.pi0 * idle + ss.sum_pi * busy + ss.sum_chi * retransmission)
    return min(1.0, max(0.0, mu_s))


def _availability(mode: BoundMode, params: ScenarioParams, policy: Policy) -> float:
    try:
        return energy_service.availability_prob(mode, params, policy)
    except ZeroDrainError as e:
        # limit of lambda_e / drain as drain -> 0
        Pavail = 1.0 if params.lambda_e > 0 else 0.0
        logger.debug(f"{e}; using Pavail={Pavail}")
        return Pavail


def throughput_bound(
    params: ScenarioParams,
    policy: Policy,
    mode: BoundMode,
    eq6_literal: bool = False,
) -> ThroughputReport:
    """
    Evaluate one throughput bound for a policy.

    Args:
        params: Scenario constants.
        policy: Secondary access policy.
        mode: LOWER or UPPER bound.
        eq6_literal: Use the printed power pairing in the throughput terms.

    Returns:
        A `ThroughputReport` with mu_s, eta, pi0, Pavail and the primary delay.

    Raises:
        UnstableQueueError: If the primary queue is unstable under the bound's service rates.
    """
    # LOWER: the secondary interferes whenever its policy says so; UPPER: never.
    interference = 1.0 if mode is BoundMode.LOWER else 0.0
    rates = queueing_service.service_probabilities(params, policy, interference)
    ss = queueing_service.steady_state(params.lambda_p, rates.omega_p, rates.gamma_p)

    # a zero drain for this bound (e.g. Ps1 = 0 in LOWER with Ps2 > 0) takes the lambda_e / drain -> inf limit
    Pavail = _availability(mode, params, policy)
    mu_s = secondary_throughput(params, policy, Pavail, ss, eq6_literal)

    return ThroughputReport(
        mu_s=mu_s,
        eta=ss.eta,
        pi0=ss.pi0,
        Pavail=Pavail,
        D_p=queueing_service.mean_delay(ss),
        mode=mode,
        omega_p=rates.omega_p,
        gamma_p=rates.gamma_p,
    )


def _mu_or_zero(params: ScenarioParams, policy: Policy, mode: BoundMode, eq6_literal: bool) -> float:
    try:
        return throughput_bound(params, policy, mode, eq6_literal).mu_s
    except UnstableQueueError:
        return 0.0


def bound_gap(params: ScenarioParams, policy: Policy, eq6_literal: bool = False) -> Tuple[float, float, float]:
    """
    Lower bound, upper bound and their difference for one policy.

    An unstable bound contributes zero throughput.
    """
    lower = _mu_or_zero(params, policy, BoundMode.LOWER, eq6_literal)
    upper = _mu_or_zero(params, policy, BoundMode.UPPER, eq6_literal)
    return lower, upper, upper - lower


def bounds_ordered(params: ScenarioParams, policy: Policy, eq6_literal: bool = False) -> bool:
    """
    Sufficient condition for the lower bound not to exceed the upper bound.

    Both bounds share sum_pi = lambda_p, and the lower bound moves probability
    from the empty state to the retransmission states. The ordering is then
    guaranteed when the lower bound's drain is at least the upper bound's and
    the secondary does at least as well in an empty slot as in a retransmission slot.
    """
    drain_lower = energy_service.transmission_drain(BoundMode.LOWER, params, policy)
    drain_upper = energy_service.transmission_drain(BoundMode.UPPER, params, policy)
    idle, _, retransmission = state_success(params, policy, eq6_literal)
    return drain_lower >= drain_upper and idle >= retransmission

# /eh-feedback-access/app/services/oracle_helpers/branch_oracle.py

"""
Brute-force enumeration of the secondary's protocol branches.

Every branch is a (probability, power, sensing index) outcome of the
secondary's decision in one primary state; a power of None means the
secondary stays silent. Summing success probabilities over the branches
gives gamma, Gamma_p and the secondary throughput without the grouped
expressions the services use.
"""

from typing import List, Optional, Tuple

from app.models.analysis_model import SteadyState
from app.models.scenario_model import Policy, ScenarioParams

from ..channel_service import success_prob

Branch = Tuple[float, Optional[float], int]

EMPTY, FIRST, RETRANSMISSION = "empty", "first", "retransmission"


def _sense_or_transmit(params: ScenarioParams, policy: Policy, pu_active: bool) -> List[Branch]:
    p_sensed_idle = params.P_MD if pu_active else 1 - params.P_FA
    a = policy
    return [
        ((1 - a.alpha_s) * a.alpha_t, a.Ps1, 0),
        ((1 - a.alpha_s) * (1 - a.alpha_t), None, 0),
        (a.alpha_s * p_sensed_idle * a.alpha_f, a.Ps1, 1),
        (a.alpha_s * p_sensed_idle * (1 - a.alpha_f), None, 1),
        (a.alpha_s * (1 - p_sensed_idle) * a.alpha_b, a.Ps2, 1),
        (a.alpha_s * (1 - p_sensed_idle) * (1 - a.alpha_b), None, 1),
    ]


def branches(params: ScenarioParams, policy: Policy, state: str) -> List[Branch]:
    """All decision outcomes of the secondary in a primary state; probabilities sum to 1."""
    if state == EMPTY:
        return _sense_or_transmit(params, policy, pu_active=False)
    if state == FIRST:
        return _sense_or_transmit(params, policy, pu_active=True)
    q, a_r = params.q, policy.alpha_r
    after_nack = [(q * a_r, policy.Ps3, 0), (q * (1 - a_r), None, 0)]
    undecoded = [(p * (1 - q), power, idx) for p, power, idx in _sense_or_transmit(params, policy, pu_active=True)]
    return after_nack + undecoded


def _primary(params: ScenarioParams, interferer: Optional[float]) -> float:
    links = params.links
    return success_prob(0, params.P_p, interferer or 0.0, links.var_p_dp, links.var_s_dp, params.consts)


def gamma(params: ScenarioParams, policy: Policy) -> float:
    return sum(p * _primary(params, power) for p, power, _ in branches(params, policy, FIRST))


def gamma_p(params: ScenarioParams, policy: Policy, Pavail: float) -> float:
    with_energy = sum(p * _primary(params, power) for p, power, _ in branches(params, policy, RETRANSMISSION))
    return Pavail * with_energy + (1 - Pavail) * _primary(params, None)


def secondary_throughput(params: ScenarioParams, policy: Policy, Pavail: float, ss: SteadyState) -> float:
    links, consts = params.links, params.consts
    weights = {EMPTY: ss.pi0, FIRST: ss.sum_pi, RETRANSMISSION: ss.sum_chi}
    total = 0.0
    for state, weight in weights.items():
        interference = 0.0 if state == EMPTY else params.P_p
        for p, power, idx in branches(params, policy, state):
            if power is None:
                continue
            total += weight * p * success_prob(idx, power, interference, links.var_s_ds, links.var_p_ds, consts)
    return Pavail * total

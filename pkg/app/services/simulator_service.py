# /eh-feedback-access/app/services/simulator_service.py

"""
Slot-level Monte Carlo simulation of the coupled primary/secondary system.

Each slot follows the queue-evolution order used by the analysis: the
primary transmits if its queue is non-empty, the secondary decides
(post-NACK access, sensed access or unsensed access), energy is checked and
spent, fading is drawn and both links are decoded, feedback is overheard,
then departures are removed before arrivals (packets and energy) are added.

The secondary's retransmission awareness is a one-slot belief flag set
only when it decoded the NACK of the failing slot; it never reads the true
primary phase.

All randomness is drawn in fixed-size chunks from a single seeded
generator, in a fixed order, so a run is bit-identical for a given seed.
"""

import math
from typing import List

import numpy as np

from app.core.logger import get_logger
from app.models.scenario_model import Policy, ScenarioParams, check_policy
from app.models.sim_model import Estimate, ForcedAvailability, SimConfig, SimResult

from .channel_service import sinr_threshold

logger = get_logger(__name__)

CHUNK_SLOTS = 65_536


class _BatchStats:
    """Per-batch accumulators for batch-means standard errors."""

    FIELDS = ("slots", "delivered", "occupancy", "empty", "drained", "arrivals", "intended", "aborted")

    def __init__(self, batches: int):
        for name in self.FIELDS:
            setattr(self, name, [0.0] * batches)

    def totals(self) -> dict:
        return {name: float(sum(getattr(self, name))) for name in self.FIELDS}


def _estimate(batch_values: List[float], value: float, samples: int) -> Estimate:
    values = np.asarray([v for v in batch_values if not math.isnan(v)], dtype=float)
    std_error = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else math.inf
    return Estimate(value=value, std_error=std_error, samples=samples)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else math.nan


def simulate(params: ScenarioParams, policy: Policy, cfg: SimConfig) -> SimResult:
    """
    Run the slot simulation and summarize it after the warmup period.

    Args:
        params: Scenario constants.
        policy: Secondary access policy.
        cfg: Run length, seed, warmup, batch count and availability override.

    Returns:
        A `SimResult` with batch-means standard errors and the energy ledger.
    """
    check_policy(params, policy)
    consts, links = params.consts, params.links
    rng = np.random.default_rng(cfg.seed)

    theta = (sinr_threshold(0, consts), sinr_threshold(1, consts))
    noise = consts.N0 * consts.W
    T, T_s = consts.T, consts.T_s
    lam, q = params.lambda_p, params.q
    P_p, P_MD, P_FA = params.P_p, params.P_MD, params.P_FA
    a_s, a_f, a_t, a_b, a_r = policy.alpha_s, policy.alpha_f, policy.alpha_t, policy.alpha_b, policy.alpha_r
    force = cfg.force_availability

    measured = cfg.slots - cfg.warmup
    stats = _BatchStats(cfg.batches)

    Q_p = 0
    Q_e = cfg.initial_energy
    retransmitting = False      # true primary phase
    nack_decoded = False        # secondary's belief, set by the previous slot
    harvested = spent = 0.0
    mismatches = 0

    slot = 0
    while slot < cfg.slots:
        n = min(CHUNK_SLOTS, cfg.slots - slot)
        arrivals = (rng.random(n) < lam).tolist()
        energy_in = rng.poisson(params.lambda_e, n).tolist()
        u_access, u_sense, u_error, u_feedback = rng.random((4, n)).tolist()
        g_pp = (rng.exponential(links.var_p_dp, n)).tolist()
        g_sp = (rng.exponential(links.var_s_dp, n)).tolist()
        g_ss = (rng.exponential(links.var_s_ds, n)).tolist()
        g_ps = (rng.exponential(links.var_p_ds, n)).tolist()

        for j in range(n):
            pu_active = Q_p > 0
            if slot >= cfg.warmup and nack_decoded != (pu_active and retransmitting):
                mismatches += 1

            # --- secondary decision ---
            power, index, cost = 0.0, 0, 0.0
            intends = False
            if nack_decoded:
                if u_access[j] < a_r:
                    intends, power, index, cost = True, policy.Ps3, 0, policy.Ps3 * T
            elif u_sense[j] < a_s:
                sensed_busy = (u_error[j] >= P_MD) if pu_active else (u_error[j] < P_FA)
                if sensed_busy and u_access[j] < a_b:
                    intends, power, index, cost = True, policy.Ps2, 1, policy.Ps2 * T_s
                elif not sensed_busy and u_access[j] < a_f:
                    intends, power, index, cost = True, policy.Ps1, 1, policy.Ps1 * T_s
            elif u_access[j] < a_t:
                intends, power, index, cost = True, policy.Ps1, 0, policy.Ps1 * T

            transmits, drained, aborted = False, 0.0, False
            if intends:
                if force is ForcedAvailability.ALWAYS:
                    transmits, drained = True, cost
                elif force is ForcedAvailability.NEVER or Q_e < cost:
                    aborted = True
                else:
                    Q_e -= cost
                    spent += cost
                    transmits, drained = True, cost

            # --- decoding ---
            su_power = power if transmits else 0.0
            pu_success = pu_active and P_p * g_pp[j] > theta[0] * (noise + su_power * g_sp[j])
            interference = P_p * g_ps[j] if pu_active else 0.0
            su_success = transmits and su_power * g_ss[j] > theta[index] * (noise + interference)

            # --- feedback and phase ---
            # a packet reaching an empty queue always starts in the first-transmission phase
            retransmitting = pu_active and not pu_success
            nack_decoded = retransmitting and u_feedback[j] < q

            if slot >= cfg.warmup:
                b = (slot - cfg.warmup) * cfg.batches // measured
                stats.slots[b] += 1
                stats.occupancy[b] += Q_p
                stats.empty[b] += Q_p == 0
                stats.delivered[b] += su_success
                stats.drained[b] += drained
                stats.arrivals[b] += arrivals[j]
                stats.intended[b] += intends
                stats.aborted[b] += aborted

            # departures before arrivals
            Q_p = Q_p - int(pu_success) + int(arrivals[j])
            Q_e += energy_in[j]
            harvested += energy_in[j]
            slot += 1

    totals = stats.totals()
    lambda_hat = _ratio(totals["arrivals"], totals["slots"])

    def per_slot(name: str) -> Estimate:
        batches = [_ratio(v, s) for v, s in zip(getattr(stats, name), stats.slots)]
        return _estimate(batches, totals[name] / measured, measured)

    occupancy = per_slot("occupancy")
    result = SimResult(
        mu_s_hat=per_slot("delivered"),
        D_p_hat=_estimate(
            [_ratio(_ratio(o, s), lambda_hat) for o, s in zip(stats.occupancy, stats.slots)],
            _ratio(occupancy.value, lambda_hat),
            measured,
        ),
        pi0_hat=per_slot("empty"),
        mu_e_hat=per_slot("drained"),
        energy_outage_rate=_estimate(
            [_ratio(a, i) for a, i in zip(stats.aborted, stats.intended)],
            _ratio(totals["aborted"], totals["intended"]) if totals["intended"] > 0 else 0.0,
            int(totals["intended"]),
        ),
        lambda_p_hat=lambda_hat,
        slots_measured=measured,
        energy_harvested=harvested,
        energy_spent_from_battery=spent,
        energy_initial=cfg.initial_energy,
        energy_final=Q_e,
        phase_belief_mismatches=mismatches,
    )
    logger.info(
        f"Simulated {cfg.slots} slots (seed={cfg.seed}): mu_s={result.mu_s_hat.value:.6g}, "
        f"D_p={result.D_p_hat.value:.6g}, pi0={result.pi0_hat.value:.6g}"
    )
    return result

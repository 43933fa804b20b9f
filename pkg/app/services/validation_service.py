# /eh-feedback-access/app/services/validation_service.py

"""
The validation suite: every closed form checked against an independent oracle.

Each check compares an estimate with a reference. Sampled checks carry a
standard error and are judged on `|estimate - reference| <= 3 * SE + slack`;
if the run is too short for `3 * SE` to fit in the check's resolution the
verdict is INCONCLUSIVE instead. Deterministic checks have no standard error.
The full-system simulation is only expected to fall near the analytical
bounds, so its excursions are reported as WARN and never fail the suite.
"""

import math
from typing import List, Optional

import numpy as np

from app.core.exceptions import UnstableQueueError
from app.core.logger import get_logger
from app.models.analysis_model import BoundMode
from app.models.config_model import RunConfig
from app.models.scenario_model import Policy, ScenarioParams
from app.models.sim_model import ForcedAvailability
from app.models.validation_model import CheckResult, ValidationReport, Verdict

from . import energy_service, optimizer_service, queueing_service, simulator_service, throughput_service
from .channel_service import success_prob
from .oracle_helpers import chain_oracle, channel_oracle

logger = get_logger(__name__)

CHANNEL_CASES = [(0, 20.0, 0.0), (1, 20.0, 0.0), (0, 20.0, 20.0), (1, 20.0, 32.0), (0, 32.0, 20.0), (1, 32.0, 20.0)]
SANDWICH_SAMPLES = 1000
BOUND_EXCURSION_SLACK = 0.01


def reference_policy(params: ScenarioParams) -> Policy:
    """Policy exercised when the configured one is silent: every branch active, Ps3 <= Ps2 <= Ps1 = P_max."""
    P = params.P_max
    return Policy(alpha_s=0.5, alpha_f=1.0, alpha_t=0.5, alpha_b=0.5, alpha_r=1.0, Ps1=P, Ps2=P / 2, Ps3=P / 4)


def sampled_verdict(diff: float, std_error: float, slack: float, resolution: float) -> Verdict:
    """Verdict for an estimate with a standard error."""
    if not math.isfinite(std_error) or 3 * std_error > resolution:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS if abs(diff) <= 3 * std_error + slack else Verdict.FAIL


def _sampled(name: str, estimate: float, std_error: float, reference: float, slack: float, resolution: float, detail: str = "") -> CheckResult:
    if math.isnan(estimate):
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = sampled_verdict(estimate - reference, std_error, slack, resolution)
    return CheckResult(
        name=name, estimate=estimate, reference=reference, tolerance=3 * std_error + slack,
        std_error=std_error, verdict=verdict, detail=detail,
    )


def _exact(name: str, estimate: float, reference: float, tolerance: float, detail: str = "") -> CheckResult:
    verdict = Verdict.PASS if abs(estimate - reference) <= tolerance else Verdict.FAIL
    return CheckResult(name=name, estimate=estimate, reference=reference, tolerance=tolerance, verdict=verdict, detail=detail)


# --- Channel ---

def check_channel(params: ScenarioParams, samples: int, seed: int) -> List[CheckResult]:
    consts, links = params.consts, params.links
    checks = []
    for n, (i, P_A, P_B) in enumerate(CHANNEL_CASES):
        reference = success_prob(i, P_A, P_B, links.var_p_dp, links.var_s_dp, consts)
        estimate, se = channel_oracle.outage_monte_carlo(
            i, P_A, P_B, links.var_p_dp, links.var_s_dp, consts, samples=samples, seed=seed + n
        )
        checks.append(_sampled(f"channel i={i} P_A={P_A:g} P_B={P_B:g}", estimate, se, reference, 1e-3, 0.01))
    return checks


# --- Steady state and delay ---

def check_steady_state(lambda_p: float, omega_p: float, gamma_p: float, label: str) -> List[CheckResult]:
    ss = queueing_service.steady_state(lambda_p, omega_p, gamma_p)
    sum_pi, sum_chi, series_delay = chain_oracle.truncated_series(ss)
    residual = float(chain_oracle.balance_residuals(ss).max())
    return [
        _exact(f"normalization {label}", ss.pi0 + sum_pi + sum_chi, 1.0, 1e-10),
        _exact(f"sum pi_k {label}", sum_pi, lambda_p, 1e-10),
        _exact(f"sum chi_k {label}", sum_chi, ss.sum_chi, 1e-10),
        _exact(f"balance residual {label}", residual, 0.0, 1e-10),
        _exact(f"delay vs series {label}", queueing_service.mean_delay(ss), series_delay, 1e-8),
    ]


# --- Simulations ---

def _rates(params: ScenarioParams, policy: Policy, mode: BoundMode):
    interference = 1.0 if mode is BoundMode.LOWER else 0.0
    return queueing_service.service_probabilities(params, policy, interference)


def check_silent_simulation(cfg: RunConfig) -> List[CheckResult]:
    params = cfg.params
    rates = _rates(params, Policy.silent(), BoundMode.UPPER)
    try:
        ss = queueing_service.steady_state(params.lambda_p, rates.omega_p, rates.gamma_p)
    except UnstableQueueError as e:
        return [CheckResult(name="silent simulation", estimate=math.nan, reference=math.nan, tolerance=0.0,
                            verdict=Verdict.INCONCLUSIVE, detail=str(e))]
    sim = simulator_service.simulate(params, Policy.silent(), cfg.sim)
    D_ref = queueing_service.mean_delay(ss)
    return [
        _sampled("silent pi0", sim.pi0_hat.value, sim.pi0_hat.std_error, ss.pi0, 0.005, 0.02),
        _sampled("silent delay", sim.D_p_hat.value, sim.D_p_hat.std_error, D_ref, 0.02 * D_ref, 0.1 * D_ref),
    ]


def check_forced_simulation(cfg: RunConfig, policy: Policy) -> List[CheckResult]:
    params = cfg.params
    rates = _rates(params, policy, BoundMode.LOWER)
    try:
        ss = queueing_service.steady_state(params.lambda_p, rates.omega_p, rates.gamma_p)
    except UnstableQueueError as e:
        return [CheckResult(name="forced-availability simulation", estimate=math.nan, reference=math.nan,
                            tolerance=0.0, verdict=Verdict.INCONCLUSIVE, detail=str(e))]
    sim_cfg = cfg.sim.model_copy(update={"force_availability": ForcedAvailability.ALWAYS})
    sim = simulator_service.simulate(params, policy, sim_cfg)
    mu_ref = throughput_service.secondary_throughput(params, policy, 1.0, ss, cfg.optim.eq6_literal)
    D_ref = queueing_service.mean_delay(ss)
    mu_e_ref = energy_service.energy_service_rate(params, policy, ss)
    return [
        _sampled("forced pi0", sim.pi0_hat.value, sim.pi0_hat.std_error, ss.pi0, 0.005, 0.02),
        _sampled("forced delay", sim.D_p_hat.value, sim.D_p_hat.std_error, D_ref, 0.02 * D_ref, 0.1 * D_ref),
        _sampled("forced mu_s", sim.mu_s_hat.value, sim.mu_s_hat.std_error, mu_ref, 0.005, 0.02),
        _sampled("forced mu_e", sim.mu_e_hat.value, sim.mu_e_hat.std_error, mu_e_ref,
                 0.01 * mu_e_ref, max(0.05 * mu_e_ref, 1e-9)),
    ]


def check_full_system(cfg: RunConfig, policy: Policy) -> CheckResult:
    params = cfg.params
    lower, upper, _ = throughput_service.bound_gap(params, policy, cfg.optim.eq6_literal)
    sim = simulator_service.simulate(params, policy, cfg.sim)
    est, se = sim.mu_s_hat.value, sim.mu_s_hat.std_error
    reference = 0.5 * (lower + upper)
    low, high = lower - 3 * se - BOUND_EXCURSION_SLACK, upper + 3 * se + BOUND_EXCURSION_SLACK
    if not math.isfinite(se) or 3 * se > 0.05:
        verdict, detail = Verdict.INCONCLUSIVE, f"bounds [{lower:.6g}, {upper:.6g}]"
    elif low <= est <= high:
        verdict, detail = Verdict.PASS, f"bounds [{lower:.6g}, {upper:.6g}]"
    else:
        excursion = low - est if est < low else est - high
        verdict, detail = Verdict.WARN, f"outside [{lower:.6g}, {upper:.6g}] by {excursion:.3g}"
        logger.warning(f"full-system throughput {est:.6g} {detail}")
    return CheckResult(name="full-system mu_s within bounds", estimate=est, reference=reference,
                       tolerance=(high - low) / 2, std_error=se, verdict=verdict, detail=detail)


# --- Bound ordering and feasibility boundary ---

def random_ordered_policies(params: ScenarioParams, count: int, seed: int) -> List[Policy]:
    """Random policies with Ps3 <= Ps2 <= Ps1 <= P_max."""
    rng = np.random.default_rng(seed)
    u = rng.random((count, 8))
    policies = []
    for row in u:
        Ps1 = row[5] * params.P_max
        Ps2 = row[6] * Ps1
        Ps3 = row[7] * Ps2
        policies.append(Policy(alpha_s=row[0], alpha_f=row[1], alpha_t=row[2], alpha_b=row[3], alpha_r=row[4],
                               Ps1=Ps1, Ps2=Ps2, Ps3=Ps3))
    return policies


def check_bound_sandwich(params: ScenarioParams, seed: int, eq6_literal: bool = False) -> CheckResult:
    worst, tested = -math.inf, 0
    for policy in random_ordered_policies(params, SANDWICH_SAMPLES, seed):
        if not throughput_service.bounds_ordered(params, policy, eq6_literal):
            continue
        lower, upper, _ = throughput_service.bound_gap(params, policy, eq6_literal)
        worst = max(worst, lower - upper)
        tested += 1
    if tested == 0:
        return CheckResult(name="bound sandwich", estimate=math.nan, reference=0.0, tolerance=1e-12,
                           verdict=Verdict.INCONCLUSIVE, detail="no sampled policy satisfied the ordering condition")
    return _exact("bound sandwich", max(worst, 0.0), 0.0, 1e-12, detail=f"{tested} ordered policies")


def silent_feasibility_boundary(params: ScenarioParams) -> Optional[float]:
    """
    Largest lambda_p for which the silent secondary meets D_max, in closed form.

    With Omega_p = Gamma_p = P_0(P_p, 0) the delay is (1 - lambda_p) / (P_0 - lambda_p).
    """
    p0 = queueing_service.compute_gamma(params, Policy.silent())
    if params.D_max <= 1.0:
        return None
    return min(1.0, max(0.0, (params.D_max * p0 - 1.0) / (params.D_max - 1.0)))


def bisect_feasibility_boundary(params: ScenarioParams, mode: BoundMode, iters: int = 60) -> float:
    """Feasibility boundary of the silent policy found through the public evaluation path."""

    def feasible(lam: float) -> bool:
        p = params.model_copy(update={"lambda_p": lam})
        return optimizer_service.evaluate(p, Policy.silent(), mode).feasible

    lo, hi = 0.0, 1.0 - 1e-12
    if not feasible(lo):
        return 0.0
    if feasible(hi):
        return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if feasible(mid) else (lo, mid)
    return lo


def check_feasibility_boundary(params: ScenarioParams) -> CheckResult:
    reference = silent_feasibility_boundary(params)
    if reference is None:
        return CheckResult(name="feasibility boundary", estimate=math.nan, reference=math.nan, tolerance=1e-6,
                           verdict=Verdict.INCONCLUSIVE, detail="D_max = 1 admits no traffic")
    estimate = bisect_feasibility_boundary(params, BoundMode.LOWER)
    return _exact("feasibility boundary", estimate, reference, 1e-6)


# --- Suite ---

def run_validate(cfg: RunConfig) -> ValidationReport:
    """
    Run every check for a configuration.

    Sample sizes follow `cfg.sim.slots` (Monte Carlo draws and simulated slots);
    seeds follow `cfg.sim.seed`.
    """
    params, seed = cfg.params, cfg.sim.seed
    policy = reference_policy(params) if cfg.policy.is_silent else cfg.policy
    rates = _rates(params, policy, BoundMode.LOWER)

    checks: List[CheckResult] = []
    checks += check_channel(params, cfg.sim.slots, seed)
    checks += check_steady_state(0.2, 0.6, 0.5, "(0.2, 0.6, 0.5)")
    if params.lambda_p > 0:
        try:
            checks += check_steady_state(params.lambda_p, rates.omega_p, rates.gamma_p, "(scenario)")
        except UnstableQueueError as e:
            logger.warning(f"scenario steady-state checks skipped: {e}")
    checks += check_silent_simulation(cfg)
    checks += check_forced_simulation(cfg, policy)
    checks.append(check_full_system(cfg, policy))
    checks.append(check_bound_sandwich(params, seed, cfg.optim.eq6_literal))
    checks.append(check_feasibility_boundary(params))

    for check in checks:
        log = logger.warning if check.verdict in (Verdict.FAIL, Verdict.INCONCLUSIVE) else logger.info
        log(f"{check.verdict.value:<12} {check.name}: estimate={check.estimate:.6g} reference={check.reference:.6g}")
    return ValidationReport(checks=checks)

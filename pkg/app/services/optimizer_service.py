# /eh-feedback-access/app/services/optimizer_service.py

"""
Constrained maximization of a secondary throughput bound.

The search runs over the unit cube; `decode` maps a point to a `Policy`
(probabilities directly, powers scaled by P_max, optionally nested so that
Ps3 <= Ps2 <= Ps1, or pinned at P_max). Each restart is a bounded
Nelder-Mead run on an exterior penalty of the two constraints
(stability and the primary delay cap). The best strictly feasible point seen
during a restart is kept, so the final answer never relies on the penalty.

Start points come from Latin-hypercube blocks seeded by (seed, block index),
so the first n restarts are the same whatever the total restart count.
"""

import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from app.core.exceptions import UnstableQueueError
from app.core.logger import get_logger
from app.models.analysis_model import BoundMode, ThroughputReport
from app.models.optim_model import Evaluation, OptimOptions, OptimResult
from app.models.scenario_model import Policy, ScenarioParams

from . import queueing_service, throughput_service

logger = get_logger(__name__)

LHS_BLOCK = 16
PROBABILITY_DIMS = 5


# --- Public evaluation path ---

def evaluate(params: ScenarioParams, policy: Policy, mode: BoundMode, eq6_literal: bool = False) -> Evaluation:
    """
    Evaluate a policy against the optimization constraints.

    Returns:
        An `Evaluation`; an unstable queue is reported as mu_s = 0, D_p = +inf,
        feasible = False, never raised.
    """
    try:
        report = throughput_service.throughput_bound(params, policy, mode, eq6_literal)
    except UnstableQueueError as e:
        return Evaluation(mu_s=0.0, eta=e.eta, D_p=math.inf, feasible=False)
    feasible = report.D_p <= params.D_max
    return Evaluation(mu_s=report.mu_s, eta=report.eta, D_p=report.D_p, feasible=feasible, report=report)


# --- Decision-space mapping ---

def dimensions(opts: OptimOptions) -> int:
    return PROBABILITY_DIMS if opts.pin_powers else PROBABILITY_DIMS + 3


def decode(x: np.ndarray, params: ScenarioParams, opts: OptimOptions) -> Policy:
    """Map a point of the unit cube to a policy."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    a_s, a_f, a_t, a_b, a_r = (float(v) for v in x[:PROBABILITY_DIMS])
    P_max = params.P_max
    if opts.pin_powers:
        Ps1 = Ps2 = Ps3 = P_max
    elif opts.enforce_power_order:
        Ps1 = float(x[5]) * P_max
        Ps2 = float(x[6]) * Ps1
        Ps3 = float(x[7]) * Ps2
    else:
        Ps1, Ps2, Ps3 = (float(v) * P_max for v in x[5:8])
    return Policy(alpha_s=a_s, alpha_f=a_f, alpha_t=a_t, alpha_b=a_b, alpha_r=a_r, Ps1=Ps1, Ps2=Ps2, Ps3=Ps3)


def encode(policy: Policy, params: ScenarioParams, opts: OptimOptions) -> np.ndarray:
    """Inverse of `decode` for policies inside its image (powers are clipped otherwise)."""
    probs = [policy.alpha_s, policy.alpha_f, policy.alpha_t, policy.alpha_b, policy.alpha_r]
    if opts.pin_powers:
        return np.array(probs, dtype=float)
    P_max = params.P_max
    if opts.enforce_power_order:
        powers = [
            policy.Ps1 / P_max,
            policy.Ps2 / policy.Ps1 if policy.Ps1 > 0 else 0.0,
            policy.Ps3 / policy.Ps2 if policy.Ps2 > 0 else 0.0,
        ]
    else:
        powers = [policy.Ps1 / P_max, policy.Ps2 / P_max, policy.Ps3 / P_max]
    return np.clip(np.array(probs + powers, dtype=float), 0.0, 1.0)


def start_points(count: int, dims: int, seed: int) -> np.ndarray:
    """The first `count` Latin-hypercube start points for a seed."""
    blocks = []
    for block in range(math.ceil(count / LHS_BLOCK)):
        sampler = qmc.LatinHypercube(d=dims, seed=np.random.default_rng([seed, block]))
        blocks.append(sampler.random(LHS_BLOCK))
    return np.vstack(blocks)[:count]


# --- Penalized objective ---

class _PenalizedObjective:
    """Objective for one restart; remembers the best strictly feasible point it evaluated."""

    def __init__(self, params: ScenarioParams, mode: BoundMode, opts: OptimOptions):
        self.params = params
        self.mode = mode
        self.opts = opts
        self.best_mu: Optional[float] = None
        self.best_x: Optional[np.ndarray] = None

    def __call__(self, x: np.ndarray) -> float:
        policy = decode(x, self.params, self.opts)
        ev = evaluate(self.params, policy, self.mode, self.opts.eq6_literal)
        w = self.opts.penalty_weight

        if ev.report is None:
            shortfall = self.params.lambda_p - ev.eta + queueing_service.STABILITY_MARGIN
            return w * (1.0 + shortfall) ** 2

        if ev.feasible and (self.best_mu is None or ev.mu_s > self.best_mu):
            self.best_mu = ev.mu_s
            self.best_x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)

        excess = max(0.0, math.log(ev.D_p / self.params.D_max))
        return -ev.mu_s + w * excess ** 2


def _run_restart(params: ScenarioParams, mode: BoundMode, opts: OptimOptions, x0: np.ndarray) -> Tuple[Optional[float], Optional[np.ndarray], bool]:
    objective = _PenalizedObjective(params, mode, opts)
    dims = len(x0)
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        bounds=[(0.0, 1.0)] * dims,
        options={"maxiter": opts.max_iters, "xatol": opts.tol, "fatol": opts.tol},
    )
    # the final simplex vertex is also offered to the feasibility filter
    objective(res.x)
    return objective.best_mu, objective.best_x, bool(res.success)


def _select(candidates: List[Tuple[float, int]], tol: float) -> int:
    """Index of the winning candidate: highest mu_s, lowest index among ties within tol."""
    top = max(mu for mu, _ in candidates)
    return min(idx for mu, idx in candidates if mu >= top - tol)


def _feasibility_sweep(params: ScenarioParams, mode: BoundMode, opts: OptimOptions) -> List[Tuple[float, Policy]]:
    found = []
    if opts.feasibility_samples > 0:
        sampler = qmc.LatinHypercube(d=dimensions(opts), seed=np.random.default_rng([opts.seed, 0xFEA5]))
        for x in sampler.random(opts.feasibility_samples):
            policy = decode(x, params, opts)
            ev = evaluate(params, policy, mode, opts.eq6_literal)
            if ev.feasible:
                found.append((ev.mu_s, policy))
    silent = Policy.silent()
    ev = evaluate(params, silent, mode, opts.eq6_literal)
    if ev.feasible:
        found.append((ev.mu_s, silent))
    return found


def _infeasible_report(params: ScenarioParams, mode: BoundMode) -> ThroughputReport:
    rates = queueing_service.service_probabilities(params, Policy.silent(), 1.0 if mode is BoundMode.LOWER else 0.0)
    eta = params.lambda_p * rates.omega_p + (1 - params.lambda_p) * rates.gamma_p
    try:
        ss = queueing_service.steady_state(params.lambda_p, rates.omega_p, rates.gamma_p)
        pi0, D_p = ss.pi0, queueing_service.mean_delay(ss)
    except UnstableQueueError:
        pi0, D_p = 0.0, math.inf
    return ThroughputReport(
        mu_s=0.0, eta=eta, pi0=pi0, Pavail=0.0, D_p=D_p, mode=mode,
        omega_p=rates.omega_p, gamma_p=rates.gamma_p,
    )


# --- Multi-start maximization ---

def maximize(params: ScenarioParams, mode: BoundMode, opts: Optional[OptimOptions] = None) -> OptimResult:
    """
    Maximize the selected throughput bound subject to stability and D_p <= D_max.

    Args:
        params: Scenario constants.
        mode: Which bound to maximize.
        opts: Search options; defaults to `OptimOptions()`.

    Returns:
        An `OptimResult`. If no feasible point exists in any restart, the
        feasibility sweep or the silent policy, the result is the silent policy
        with mu_s = 0 and feasible = False.
    """
    opts = opts or OptimOptions()
    dims = dimensions(opts)
    starts = [encode(p, params, opts) for p in opts.initial_policies]
    starts.extend(start_points(opts.restarts, dims, opts.seed))

    candidates: List[Tuple[float, int]] = []
    policies = {}
    history: List[float] = []
    converged = 0

    for idx, x0 in enumerate(starts):
        best_mu, best_x, success = _run_restart(params, mode, opts, x0)
        converged += int(success)
        if best_mu is not None:
            candidates.append((best_mu, idx))
            policies[idx] = decode(best_x, params, opts)
        logger.debug(f"restart {idx}: best feasible mu_s={best_mu}, converged={success}")
        if opts.keep_history:
            history.append(max((mu for mu, _ in candidates), default=0.0))

    feasible_restarts = len(candidates)
    if not candidates:
        logger.info("No restart reached a feasible point, running the feasibility sweep.")
        for offset, (mu, policy) in enumerate(_feasibility_sweep(params, mode, opts)):
            idx = len(starts) + offset
            candidates.append((mu, idx))
            policies[idx] = policy

    if not candidates:
        logger.warning(f"No feasible policy for lambda_p={params.lambda_p}, mode={mode.value}; SU stays silent.")
        return OptimResult(
            best_policy=Policy.silent(),
            report=_infeasible_report(params, mode),
            feasible=False,
            restarts_converged=converged,
            feasible_restarts=0,
            objective_history=history if opts.keep_history else None,
        )

    winner = policies[_select(candidates, opts.tol)]
    # re-verified through the public path
    final = evaluate(params, winner, mode, opts.eq6_literal)
    logger.info(
        f"Optimized {mode.value} bound: mu_s={final.mu_s:.6g}, D_p={final.D_p:.6g}, "
        f"{feasible_restarts}/{len(starts)} restarts feasible"
    )
    return OptimResult(
        best_policy=winner,
        report=final.report,
        feasible=final.feasible,
        restarts_converged=converged,
        feasible_restarts=feasible_restarts,
        objective_history=history if opts.keep_history else None,
    )

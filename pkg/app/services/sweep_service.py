# /eh-feedback-access/app/services/sweep_service.py

"""
Parameter sweeps of the optimized throughput bounds.

Every (axis value, bound mode, power pinning) combination is an independent
optimization job. Jobs run concurrently in worker threads, bounded by a
semaphore sized from `AppSettings.max_workers`; results are collected with
`asyncio.gather`, so rows come back in job order whatever the completion order.

After all jobs finish, an optional cross-seeding pass evaluates each point's
best policy at every other point of the same curve and keeps the best feasible
one. The pass runs in a fixed order, so output is deterministic.
"""

import asyncio
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from app.core.config import get_settings
from app.core.exceptions import ConfigError
from app.core.logger import get_logger
from app.models.analysis_model import BoundMode
from app.models.optim_model import OptimOptions, OptimResult
from app.models.scenario_model import ScenarioParams
from app.models.sweep_model import SweepPoint, SweepSpec

from . import optimizer_service

logger = get_logger(__name__)

Job = Tuple[float, BoundMode, bool]


def point_params(sweep_spec: SweepSpec, value: float) -> ScenarioParams:
    """The fixed parameters with the swept one replaced."""
    try:
        return ScenarioParams.model_validate({**sweep_spec.fixed.model_dump(), sweep_spec.axis.value: value})
    except ValidationError as e:
        raise ConfigError(e.errors()[0]["msg"], key=sweep_spec.axis.value) from e


def _options(sweep_spec: SweepSpec, pinned: bool) -> OptimOptions:
    return sweep_spec.optim.model_copy(update={"pin_powers": True}) if pinned else sweep_spec.optim


def sweep_jobs(sweep_spec: SweepSpec) -> List[Job]:
    """Jobs in output order: axis value, then mode, then unpinned before pinned."""
    pinning = [False, True] if sweep_spec.compare_pinned_powers else [sweep_spec.optim.pin_powers]
    return [
        (value, mode, pinned)
        for value in sweep_spec.values
        for mode in sweep_spec.mode.bound_modes()
        for pinned in pinning
    ]


async def _optimize_point_with_semaphore(
    semaphore: asyncio.Semaphore, sweep_spec: SweepSpec, params: ScenarioParams, job: Job
) -> SweepPoint:
    """Acquire the semaphore, then optimize one point in a worker thread."""
    value, mode, pinned = job
    async with semaphore:
        result = await asyncio.to_thread(optimizer_service.maximize, params, mode, _options(sweep_spec, pinned))
    logger.info(f"sweep {sweep_spec.axis.value}={value:g} mode={mode.value} pinned={pinned}: mu_s={result.report.mu_s:.6g}")
    if not result.feasible:
        logger.warning(f"sweep point {sweep_spec.axis.value}={value:g} ({mode.value}) is infeasible")
    return SweepPoint(axis_value=value, mode=mode, pinned=pinned, result=result)


def cross_seed(sweep_spec: SweepSpec, points: List[SweepPoint], params_by_value: Dict[float, ScenarioParams]) -> List[SweepPoint]:
    """
    Let every point try the best policies found at the other points of its curve.

    A borrowed policy replaces the point's own only if it is feasible there and
    better by more than the optimizer tolerance; ties keep the earliest point.
    """
    tol = sweep_spec.optim.tol
    improved: List[SweepPoint] = []
    for point in points:
        params = params_by_value[point.axis_value]
        opts = _options(sweep_spec, point.pinned)
        best_result: OptimResult = point.result
        best_mu = point.result.report.mu_s if point.result.feasible else -1.0
        for donor in points:
            if donor is point or donor.mode != point.mode or donor.pinned != point.pinned:
                continue
            ev = optimizer_service.evaluate(params, donor.result.best_policy, point.mode, opts.eq6_literal)
            if ev.feasible and ev.mu_s > best_mu + tol:
                best_mu = ev.mu_s
                best_result = best_result.model_copy(
                    update={"best_policy": donor.result.best_policy, "report": ev.report, "feasible": True}
                )
        if best_result is not point.result:
            logger.debug(f"cross-seeding improved {sweep_spec.axis.value}={point.axis_value:g} ({point.mode.value}) to {best_mu:.6g}")
        improved.append(point.model_copy(update={"result": best_result}))
    return improved


async def run_sweep(sweep_spec: SweepSpec, max_workers: Optional[int] = None) -> List[SweepPoint]:
    """
    Optimize every sweep point concurrently.

    Args:
        sweep_spec: The sweep description.
        max_workers: Concurrency bound; defaults to the runtime settings.

    Returns:
        One `SweepPoint` per job, in `sweep_jobs` order.

    Raises:
        ConfigError: If a swept value violates a parameter invariant.
    """
    params_by_value = {value: point_params(sweep_spec, value) for value in sweep_spec.values}
    semaphore = asyncio.Semaphore(max_workers or get_settings().max_workers)
    jobs = sweep_jobs(sweep_spec)
    logger.info(f"Sweeping {sweep_spec.axis.value} over {len(sweep_spec.values)} values ({len(jobs)} optimizations)")

    tasks = [
        _optimize_point_with_semaphore(semaphore, sweep_spec, params_by_value[job[0]], job)
        for job in jobs
    ]
    points = list(await asyncio.gather(*tasks))

    if sweep_spec.cross_seed:
        points = cross_seed(sweep_spec, points, params_by_value)
    return points


def sweep(sweep_spec: SweepSpec, max_workers: Optional[int] = None) -> List[SweepPoint]:
    """Blocking entry point for the command line."""
    return asyncio.run(run_sweep(sweep_spec, max_workers))

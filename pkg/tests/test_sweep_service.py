# /tests/test_sweep_service.py

import asyncio
import time

import pytest

from app.core.exceptions import ConfigError
from app.models.analysis_model import BoundMode
from app.models.optim_model import OptimOptions, OptimResult
from app.models.scenario_model import Policy, ScenarioParams
from app.models.sweep_model import SweepAxis, SweepMode, SweepPoint, SweepSpec
from app.services import optimizer_service, sweep_service

# --- Fixtures ---

@pytest.fixture
def tiny_options():
    return OptimOptions(restarts=2, max_iters=80, feasibility_samples=20, seed=2)


@pytest.fixture
def sweep_spec(tiny_options):
    return SweepSpec(axis=SweepAxis.LAMBDA_P, values=[0.05, 0.15], mode=SweepMode.BOTH, optim=tiny_options)


def fake_maximize(params, mode, opts):
    """Stand-in optimizer whose answer encodes the point it was asked about."""
    # later points finish first
    time.sleep(0.05 * (1 - params.lambda_p))
    policy = Policy(alpha_t=1.0, Ps1=20.0)
    ev = optimizer_service.evaluate(params, policy, mode)
    return OptimResult(best_policy=policy, report=ev.report, feasible=ev.feasible,
                       restarts_converged=int(opts.pin_powers), feasible_restarts=1)

# --- Job layout ---

def test_jobs_are_ordered_by_value_then_mode_then_pinning(sweep_spec):
    jobs = sweep_service.sweep_jobs(sweep_spec.model_copy(update={"compare_pinned_powers": True}))
    assert jobs == [
        (0.05, BoundMode.LOWER, False), (0.05, BoundMode.LOWER, True),
        (0.05, BoundMode.UPPER, False), (0.05, BoundMode.UPPER, True),
        (0.15, BoundMode.LOWER, False), (0.15, BoundMode.LOWER, True),
        (0.15, BoundMode.UPPER, False), (0.15, BoundMode.UPPER, True),
    ]
    print("\n✅ SUCCESS: test_jobs_are_ordered_by_value_then_mode_then_pinning passed.")


def test_point_params_replaces_the_axis(sweep_spec):
    params = sweep_service.point_params(sweep_spec.model_copy(update={"axis": SweepAxis.D_MAX}), 4.0)
    assert params.D_max == 4.0
    assert params.lambda_p == sweep_spec.fixed.lambda_p
    with pytest.raises(ConfigError) as excinfo:
        sweep_service.point_params(sweep_spec.model_copy(update={"axis": SweepAxis.Q}), 1.5)
    assert excinfo.value.key == "q"
    print("\n✅ SUCCESS: test_point_params_replaces_the_axis passed.")


def test_sweep_values_must_increase():
    with pytest.raises(ValueError):
        SweepSpec(axis=SweepAxis.Q, values=[0.5, 0.5])
    print("\n✅ SUCCESS: test_sweep_values_must_increase passed.")

# --- Concurrent execution ---

@pytest.mark.asyncio
async def test_rows_come_back_in_job_order(mocker, sweep_spec):
    """
    GIVEN an optimizer whose later points finish first
    WHEN the sweep gathers its concurrent jobs
    THEN the points are still returned in job order.
    """
    mocker.patch.object(sweep_service.optimizer_service, "maximize", side_effect=fake_maximize)
    sweep_spec = sweep_spec.model_copy(update={"cross_seed": False, "compare_pinned_powers": True})
    points = await sweep_service.run_sweep(sweep_spec, max_workers=8)
    assert [(p.axis_value, p.mode, p.pinned) for p in points] == sweep_service.sweep_jobs(sweep_spec)
    assert [p.result.restarts_converged for p in points] == [int(p.pinned) for p in points]
    print("\n✅ SUCCESS: test_rows_come_back_in_job_order passed.")


@pytest.mark.asyncio
async def test_semaphore_bounds_concurrency(mocker, sweep_spec):
    running, peak = 0, 0
    lock = asyncio.Lock()

    async def tracked_to_thread(func, *args):
        nonlocal running, peak
        async with lock:
            running += 1
            peak = max(peak, running)
        await asyncio.sleep(0.01)
        async with lock:
            running -= 1
        return fake_maximize(*args)

    mocker.patch.object(sweep_service.asyncio, "to_thread", side_effect=tracked_to_thread)
    await sweep_service.run_sweep(sweep_spec.model_copy(update={"cross_seed": False}), max_workers=2)
    assert peak == 2
    print("\n✅ SUCCESS: test_semaphore_bounds_concurrency passed.")


@pytest.mark.asyncio
async def test_sweep_is_deterministic_across_worker_counts(sweep_spec):
    serial = await sweep_service.run_sweep(sweep_spec, max_workers=1)
    parallel = await sweep_service.run_sweep(sweep_spec, max_workers=4)
    assert serial == parallel
    assert len(serial) == 4
    assert all(p.result.feasible for p in serial)
    print("\n✅ SUCCESS: test_sweep_is_deterministic_across_worker_counts passed.")


def test_blocking_entry_point(sweep_spec):
    points = sweep_service.sweep(sweep_spec.model_copy(update={"mode": SweepMode.LOWER, "values": [0.1]}), max_workers=1)
    assert len(points) == 1
    assert points[0].mode is BoundMode.LOWER
    print("\n✅ SUCCESS: test_blocking_entry_point passed.")

# --- Cross-seeding ---

def test_cross_seeding_adopts_a_better_neighbour_policy(sweep_spec):
    """
    GIVEN one point stuck at the silent policy and a neighbour with a feasible transmitting policy
    WHEN cross-seeding runs
    THEN the stuck point adopts the neighbour's policy and the neighbour keeps its own.
    """
    sweep_spec = sweep_spec.model_copy(update={"values": [0.1, 0.2], "mode": SweepMode.LOWER})
    params_by_value = {v: ScenarioParams(lambda_p=v) for v in sweep_spec.values}

    def point(value, policy):
        ev = optimizer_service.evaluate(params_by_value[value], policy, BoundMode.LOWER)
        result = OptimResult(best_policy=policy, report=ev.report, feasible=ev.feasible, restarts_converged=1)
        return SweepPoint(axis_value=value, mode=BoundMode.LOWER, pinned=False, result=result)

    transmitting = Policy(alpha_t=1.0, Ps1=20.0)
    points = [point(0.1, Policy.silent()), point(0.2, transmitting)]
    seeded = sweep_service.cross_seed(sweep_spec, points, params_by_value)

    assert seeded[0].result.best_policy == transmitting
    assert seeded[0].result.report.mu_s > points[0].result.report.mu_s
    assert seeded[0].result.feasible
    assert seeded[1] == points[1]
    print("\n✅ SUCCESS: test_cross_seeding_adopts_a_better_neighbour_policy passed.")


@pytest.mark.asyncio
async def test_cross_seeding_never_lowers_throughput(sweep_spec):
    plain = await sweep_service.run_sweep(sweep_spec.model_copy(update={"cross_seed": False}), max_workers=2)
    seeded = await sweep_service.run_sweep(sweep_spec, max_workers=2)
    for before, after in zip(plain, seeded):
        assert after.result.report.mu_s >= before.result.report.mu_s
    print("\n✅ SUCCESS: test_cross_seeding_never_lowers_throughput passed.")

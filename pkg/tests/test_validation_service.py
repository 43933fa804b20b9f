# /tests/test_validation_service.py

import math

import numpy as np
import pytest

from app.models.config_model import RunConfig
from app.models.scenario_model import Policy, ScenarioParams
from app.models.sim_model import SimConfig
from app.models.validation_model import Verdict
from app.services import config_service, validation_service

# --- Fixtures ---

@pytest.fixture
def params():
    return ScenarioParams()


@pytest.fixture
def short_config():
    """The baseline configuration with a deliberately tiny sample budget."""
    return config_service.with_overrides(config_service.default_config(), slots=1000, warmup=100)

# --- Verdict logic ---

def test_sampled_verdicts():
    assert validation_service.sampled_verdict(0.004, 0.001, 0.002, 0.01) is Verdict.PASS
    assert validation_service.sampled_verdict(-0.02, 0.001, 0.002, 0.01) is Verdict.FAIL
    assert validation_service.sampled_verdict(0.5, 0.01, 0.002, 0.01) is Verdict.INCONCLUSIVE
    assert validation_service.sampled_verdict(0.0, math.inf, 0.002, 0.01) is Verdict.INCONCLUSIVE
    print("\n✅ SUCCESS: test_sampled_verdicts passed.")


def test_reference_policy_scales_with_power_cap(params):
    policy = validation_service.reference_policy(params.model_copy(update={"P_max": 10.0}))
    assert (policy.Ps1, policy.Ps2, policy.Ps3) == (10.0, 5.0, 2.5)
    assert not policy.is_silent
    print("\n✅ SUCCESS: test_reference_policy_scales_with_power_cap passed.")

# --- Deterministic checks ---

def test_steady_state_checks_pass():
    checks = validation_service.check_steady_state(0.2, 0.6, 0.5, "reference")
    assert len(checks) == 5
    assert all(c.verdict is Verdict.PASS for c in checks)
    print("\n✅ SUCCESS: test_steady_state_checks_pass passed.")


def test_steady_state_checks_pass_under_heavy_load():
    """
    GIVEN a stable triple whose level terms grow faster than (1 - eta) shrinks them
    WHEN the steady-state checks sum 10^5 levels
    THEN normalization, both level sums and the delay series all pass.
    """
    checks = validation_service.check_steady_state(0.45, 0.6, 0.56, "heavy")
    assert [c.verdict for c in checks] == [Verdict.PASS] * 5
    assert all(math.isfinite(c.estimate) for c in checks)
    print("\n✅ SUCCESS: test_steady_state_checks_pass_under_heavy_load passed.")


def test_silent_feasibility_boundary(params):
    """
    GIVEN the reference scenario with D_max = 10
    WHEN the silent secondary's largest feasible lambda_p is found in closed form and by bisection
    THEN both give (10 * P0 - 1) / 9, about 0.52907.
    """
    boundary = validation_service.silent_feasibility_boundary(params)
    assert boundary == pytest.approx(0.52907, abs=1e-4)
    check = validation_service.check_feasibility_boundary(params)
    assert check.verdict is Verdict.PASS
    assert check.estimate == pytest.approx(boundary, abs=1e-6)
    print("\n✅ SUCCESS: test_silent_feasibility_boundary passed.")


def test_unit_delay_cap_has_no_boundary(params):
    p = params.model_copy(update={"D_max": 1.0})
    assert validation_service.silent_feasibility_boundary(p) is None
    assert validation_service.check_feasibility_boundary(p).verdict is Verdict.INCONCLUSIVE
    print("\n✅ SUCCESS: test_unit_delay_cap_has_no_boundary passed.")


def test_bound_sandwich_holds_at_reference_scenario(params):
    check = validation_service.check_bound_sandwich(params, seed=1)
    assert check.verdict is Verdict.PASS
    assert "ordered policies" in check.detail
    print("\n✅ SUCCESS: test_bound_sandwich_holds_at_reference_scenario passed.")


def test_random_ordered_policies_respect_order(params):
    for policy in validation_service.random_ordered_policies(params, 100, seed=2):
        assert policy.Ps3 <= policy.Ps2 <= policy.Ps1 <= params.P_max
    print("\n✅ SUCCESS: test_random_ordered_policies_respect_order passed.")

# --- Suite ---

def test_short_runs_are_inconclusive_not_failed(short_config):
    """
    GIVEN only 10^3 Monte Carlo draws and simulated slots
    WHEN the suite runs
    THEN sampled checks cannot decide and nothing fails.
    """
    report = validation_service.run_validate(short_config)
    assert not report.failed
    channel = [c for c in report.checks if c.name.startswith("channel")]
    assert len(channel) == len(validation_service.CHANNEL_CASES)
    assert all(c.verdict is Verdict.INCONCLUSIVE for c in channel)
    exact = [c for c in report.checks if c.std_error is None and not math.isnan(c.estimate)]
    assert exact and all(c.verdict is Verdict.PASS for c in exact)
    print("\n✅ SUCCESS: test_short_runs_are_inconclusive_not_failed passed.")


def test_suite_fails_when_an_oracle_disagrees(mocker, short_config):
    mocker.patch.object(validation_service.chain_oracle, "balance_residuals", return_value=np.array([1e-3]))
    report = validation_service.run_validate(short_config)
    assert report.failed
    failing = [c.name for c in report.checks if c.verdict is Verdict.FAIL]
    assert any(name.startswith("balance residual") for name in failing)
    print("\n✅ SUCCESS: test_suite_fails_when_an_oracle_disagrees passed.")


def test_heavily_loaded_scenario_does_not_fail():
    cfg = RunConfig(
        params=ScenarioParams(lambda_p=0.45),
        policy=Policy(alpha_t=0.05, Ps1=5.0),
        sim=SimConfig(slots=20_000, warmup=1_000),
    )
    report = validation_service.run_validate(cfg)
    scenario = [c for c in report.checks if c.name.endswith("(scenario)")]
    assert len(scenario) == 5
    assert all(c.verdict is Verdict.PASS for c in scenario)
    assert not report.failed
    print("\n✅ SUCCESS: test_heavily_loaded_scenario_does_not_fail passed.")


@pytest.mark.slow
def test_reference_configuration_passes():
    cfg = config_service.with_overrides(config_service.default_config(), slots=400_000, warmup=10_000)
    report = validation_service.run_validate(cfg)
    failing = [(c.name, c.estimate, c.reference) for c in report.checks if c.verdict is Verdict.FAIL]
    assert failing == []
    assert sum(c.verdict is Verdict.PASS for c in report.checks) >= 15
    print("\n✅ SUCCESS: test_reference_configuration_passes passed.")

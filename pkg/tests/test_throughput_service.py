# /tests/test_throughput_service.py

import numpy as np
import pytest

from app.core.exceptions import UnstableQueueError
from app.models.analysis_model import BoundMode
from app.models.scenario_model import Policy, ScenarioParams
from app.services import energy_service, queueing_service, throughput_service
from app.services.channel_service import secondary_success
from app.services.oracle_helpers import branch_oracle

# --- Fixtures ---

@pytest.fixture
def params():
    return ScenarioParams()


@pytest.fixture
def mixed_policy():
    return Policy(alpha_s=0.5, alpha_f=1.0, alpha_t=0.5, alpha_b=0.5, alpha_r=1.0, Ps1=32.0, Ps2=16.0, Ps3=8.0)


def random_ordered_policies(count, P_max, seed):
    rng = np.random.default_rng(seed)
    policies = []
    for _ in range(count):
        probs = rng.uniform(0, 1, size=5)
        powers = np.sort(rng.uniform(0, P_max, size=3))[::-1]
        policies.append(Policy(alpha_s=probs[0], alpha_f=probs[1], alpha_t=probs[2], alpha_b=probs[3],
                               alpha_r=probs[4], Ps1=powers[0], Ps2=powers[1], Ps3=powers[2]))
    return policies

# --- Secondary throughput ---

def test_throughput_is_zero_without_energy(params, mixed_policy):
    ss = queueing_service.steady_state(0.2, 0.6, 0.5)
    assert throughput_service.secondary_throughput(params, mixed_policy, 0.0, ss) == 0.0
    print("\n✅ SUCCESS: test_throughput_is_zero_without_energy passed.")


def test_throughput_is_linear_in_availability(params, mixed_policy):
    ss = queueing_service.steady_state(0.2, 0.6, 0.5)
    full = throughput_service.secondary_throughput(params, mixed_policy, 1.0, ss)
    for Pavail in (0.1, 0.4, 0.75):
        assert throughput_service.secondary_throughput(params, mixed_policy, Pavail, ss) == pytest.approx(Pavail * full)
    print("\n✅ SUCCESS: test_throughput_is_linear_in_availability passed.")


def test_throughput_matches_branch_enumeration(params, mixed_policy):
    """
    GIVEN a policy exercising every sensing and feedback branch
    WHEN the grouped throughput is compared with a brute-force branch sum
    THEN both agree for any availability and steady state.
    """
    for lam, omega, gamma in ((0.2, 0.6, 0.5), (0.05, 0.3, 0.4), (0.3, 0.9, 0.7)):
        ss = queueing_service.steady_state(lam, omega, gamma)
        for Pavail in (0.25, 1.0):
            assert throughput_service.secondary_throughput(params, mixed_policy, Pavail, ss) == pytest.approx(
                branch_oracle.secondary_throughput(params, mixed_policy, Pavail, ss), abs=1e-12)
    print("\n✅ SUCCESS: test_throughput_matches_branch_enumeration passed.")


def test_lone_secondary_throughput_without_primary_traffic(params):
    """With no primary arrivals the queue is always empty and only the idle term remains."""
    p = params.model_copy(update={"lambda_p": 0.0})
    policy = Policy(alpha_t=1.0, Ps1=32.0)
    report = throughput_service.throughput_bound(p, policy, BoundMode.LOWER)
    expected = 0.625 * secondary_success(0, 32.0, 0.0, p.consts, p.links)
    assert report.pi0 == pytest.approx(1.0)
    assert report.mu_s == pytest.approx(expected)
    assert report.mu_s == pytest.approx(0.625 * 0.70846, abs=1e-4)
    print("\n✅ SUCCESS: test_lone_secondary_throughput_without_primary_traffic passed.")


def test_printed_pairing_differs_only_in_busy_sensed_and_nack_powers(params, mixed_policy):
    ss = queueing_service.steady_state(0.2, 0.6, 0.5)
    protocol = throughput_service.secondary_throughput(params, mixed_policy, 1.0, ss)
    literal = throughput_service.secondary_throughput(params, mixed_policy, 1.0, ss, eq6_literal=True)
    assert protocol != pytest.approx(literal)

    equal_powers = mixed_policy.model_copy(update={"Ps2": 8.0, "Ps3": 8.0})
    assert throughput_service.secondary_throughput(params, equal_powers, 1.0, ss) == pytest.approx(
        throughput_service.secondary_throughput(params, equal_powers, 1.0, ss, eq6_literal=True))
    print("\n✅ SUCCESS: test_printed_pairing_differs_only_in_busy_sensed_and_nack_powers passed.")

# --- Bounds ---

def test_silent_policy_bounds_coincide(params):
    """
    GIVEN the silent policy at the reference scenario
    WHEN both bounds are evaluated
    THEN they report the same queue (mu_s = 0, Pavail from the zero-drain limit).
    """
    lower = throughput_service.throughput_bound(params, Policy.silent(), BoundMode.LOWER)
    upper = throughput_service.throughput_bound(params, Policy.silent(), BoundMode.UPPER)
    assert lower.mu_s == upper.mu_s == 0.0
    assert lower.Pavail == upper.Pavail == 1.0
    assert lower.eta == pytest.approx(upper.eta)
    assert lower.D_p == pytest.approx(upper.D_p)
    assert lower.eta == pytest.approx(0.57617, abs=1e-5)
    print("\n✅ SUCCESS: test_silent_policy_bounds_coincide passed.")


def test_lower_bound_with_zero_unsensed_power_takes_the_harvest_limit(params):
    """
    GIVEN a sensing-only policy with Ps1 = 0 but Ps2 > 0
    WHEN the lower bound is evaluated
    THEN the zero lower-bound drain gives Pavail = 1 while energy arrives, and 0 when none does.
    """
    policy = Policy(alpha_s=1.0, alpha_b=1.0, Ps2=10.0)
    report = throughput_service.throughput_bound(params, policy, BoundMode.LOWER)
    ss = queueing_service.steady_state(params.lambda_p, report.omega_p, report.gamma_p)
    assert report.Pavail == 1.0
    assert report.mu_s == pytest.approx(throughput_service.secondary_throughput(params, policy, 1.0, ss))
    assert report.mu_s > 0.0

    starved = throughput_service.throughput_bound(params.model_copy(update={"lambda_e": 0.0}), policy, BoundMode.LOWER)
    assert starved.Pavail == 0.0
    assert starved.mu_s == 0.0
    print("\n✅ SUCCESS: test_lower_bound_with_zero_unsensed_power_takes_the_harvest_limit passed.")


def test_bound_report_fields(params, mixed_policy):
    report = throughput_service.throughput_bound(params, mixed_policy, BoundMode.LOWER)
    assert report.mode is BoundMode.LOWER
    assert report.Pavail == pytest.approx(energy_service.availability_prob(BoundMode.LOWER, params, mixed_policy))
    ss = queueing_service.steady_state(params.lambda_p, report.omega_p, report.gamma_p)
    assert report.pi0 == pytest.approx(ss.pi0)
    assert report.D_p == pytest.approx(queueing_service.mean_delay(ss))
    print("\n✅ SUCCESS: test_bound_report_fields passed.")


def test_upper_bound_never_sees_interference(params, mixed_policy):
    report = throughput_service.throughput_bound(params, mixed_policy, BoundMode.UPPER)
    silent = throughput_service.throughput_bound(params, Policy.silent(), BoundMode.UPPER)
    assert report.omega_p == pytest.approx(silent.omega_p)
    assert report.gamma_p == pytest.approx(silent.gamma_p)
    print("\n✅ SUCCESS: test_upper_bound_never_sees_interference passed.")


def test_unstable_bound_raises(params):
    p = params.model_copy(update={"lambda_p": 0.6})
    with pytest.raises(UnstableQueueError):
        throughput_service.throughput_bound(p, Policy.silent(), BoundMode.UPPER)
    assert throughput_service.bound_gap(p, Policy.silent()) == (0.0, 0.0, 0.0)
    print("\n✅ SUCCESS: test_unstable_bound_raises passed.")


def test_lower_bound_never_exceeds_upper_bound_when_ordered(params):
    """
    GIVEN 500 random policies with Ps3 <= Ps2 <= Ps1
    WHEN the ordering condition holds for a policy
    THEN its lower bound does not exceed its upper bound.
    """
    checked = 0
    for policy in random_ordered_policies(500, params.P_max, seed=21):
        if not throughput_service.bounds_ordered(params, policy):
            continue
        lower, upper, gap = throughput_service.bound_gap(params, policy)
        assert lower <= upper + 1e-12
        assert gap == pytest.approx(upper - lower)
        checked += 1
    assert checked > 50
    print(f"\n✅ SUCCESS: bounds ordered on {checked} policies.")


def test_lower_bound_can_exceed_upper_bound_outside_the_condition(params):
    """
    GIVEN a secondary that only transmits after decoding a NACK
    WHEN both bounds are evaluated
    THEN the lower bound keeps more retransmission slots and exceeds the upper bound.
    """
    policy = Policy(alpha_r=1.0, Ps1=20.0, Ps2=0.0, Ps3=20.0)
    assert not throughput_service.bounds_ordered(params, policy)
    lower, upper, gap = throughput_service.bound_gap(params, policy)
    assert lower > upper > 0.0
    assert gap < 0.0
    print("\n✅ SUCCESS: test_lower_bound_can_exceed_upper_bound_outside_the_condition passed.")

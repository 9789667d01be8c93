import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pot.distributions import Discrete, Exponential, ThreePointHard, Uniform
from pot.dp_optimal import compute_dp, g_function
from pot.oracle import exact_optimal_value, exact_policy_value
from pot.policies import (
    ThresholdPolicy,
    expected_policy_value,
    onl_policy,
    onl_schedule,
    optimal_policy,
    policy_from_name,
    prophet_value,
    run_policy,
    run_policy_batch,
    simple_policy,
    trace_policy,
)

U = Uniform(0.0, 1.0)
E = Exponential(1.0)
E1 = math.exp(-1)
G2_EXP = E1 * 2 * 2 + (1 - E1) * ((1 - 2 * E1) / (1 - E1) + 1)


def test_dp_uniform_small():
    t = compute_dp(U, 1)
    assert t.G.tolist() == [0.0, 0.5] and t.tau.tolist() == [0.0, 0.5]
    t = compute_dp(U, 2)
    assert t.G[2] == pytest.approx(1.125, abs=1e-15)
    assert t.tau[2] == pytest.approx(0.5625, abs=1e-15)


def test_dp_exponential_two():
    assert G2_EXP == pytest.approx(2.3678, abs=1e-4)
    assert compute_dp(E, 2).G[2] == pytest.approx(G2_EXP, rel=1e-12)


def test_dp_invariants():
    t = compute_dp(E, 300)
    assert t.G[0] == 0 and t.tau[0] == 0
    assert np.all(np.diff(t.tau[1:]) >= 0)
    assert np.array_equal(t.G, t.tau * np.arange(301))
    with pytest.raises(ValueError):
        t.G[0] = 1.0


def test_dp_rejects_bad_n():
    for n in (0, -1, 2.5):
        with pytest.raises(ValueError):
            compute_dp(U, n)


def test_g_function_examples():
    assert g_function(U, 0.0) == 0.0
    assert g_function(E, 0.0) == 0.0
    assert g_function(U, 1.0) == pytest.approx(-0.5)
    assert g_function(U, 0.5) == pytest.approx(-0.125)


@given(t1=st.floats(0.0, 5.0), dt=st.floats(0.0, 5.0))
def test_g_nonincreasing(t1, dt):
    for d in (U, E, ThreePointHard(50)):
        assert g_function(d, t1 + dt) <= g_function(d, t1) + 1e-12


def test_dp_matches_full_oracle_on_hard_instance():
    for n in range(2, 12):
        d = ThreePointHard(max(n, 2))
        assert compute_dp(d, n).G[n] == pytest.approx(exact_optimal_value(d, n).value, abs=1e-12)


def test_single_atom_is_flat():
    d = Discrete((3.0,), (1.0,))
    t = compute_dp(d, 40)
    assert np.all(t.tau[1:] == 3.0)


# -- policies ------------------------------------------------------------------

def test_optimal_policy_examples():
    assert optimal_policy(compute_dp(U, 2)).theta.tolist() == [0.5, 0.0]
    assert optimal_policy(compute_dp(U, 1)).theta.tolist() == [0.0]
    th = optimal_policy(compute_dp(E, 3)).theta
    assert th[0] == pytest.approx(G2_EXP / 2, rel=1e-12)
    assert th[0] == pytest.approx(1.1839, abs=1e-4)


def test_simple_policy_examples():
    assert np.allclose(simple_policy(U, 10, 2).theta, 0.8)
    assert np.allclose(simple_policy(E, 10, 2).theta, -math.log(0.2))
    with pytest.raises(ValueError):
        simple_policy(U, 2, 2)
    # relaxed form: level 0 maps to the lower end of the support
    assert simple_policy(U, 2, 2, strict=False).theta.tolist() == [0.0, 0.0]


def test_onl_schedule_examples():
    p = onl_schedule(100, 9.71)
    assert p[0] == 1.0
    assert p[100] == pytest.approx(math.exp(-9.71 / 100), rel=1e-15)
    assert p[100] == pytest.approx(0.9075, abs=1e-4)
    assert onl_schedule(1, 9.71)[1] == pytest.approx(6.05e-5, abs=2e-7)
    assert p[101] == 0.0 and p[102] == 0.0
    assert np.all(np.diff(p[: 101]) < 0)


def test_onl_policy_thresholds():
    pol = onl_policy(U, 50, 9.71)
    assert np.allclose(pol.theta, onl_schedule(50, 9.71)[1:51])
    assert np.all(np.diff(pol.theta) < 0)


@pytest.mark.parametrize("theta,xs,want", [
    ([0.5, 0.0], [0.6, 0.9], 1.2),
    ([0.5, 0.0], [0.4, 0.9], 1.3),
    ([0.5, 0.5, 0.5], [0.1, 0.2, 0.3], 0.6),
    ([0.5, 0.0], [0.5, 0.9], 1.4),  # tie is not a strict exceedance
])
def test_run_policy_traces(theta, xs, want):
    pol = ThresholdPolicy(len(theta), np.array(theta), "manual")
    assert run_policy(pol, xs) == pytest.approx(want)
    assert run_policy_batch(pol.theta, np.array([xs]))[0] == pytest.approx(want)
    trace = trace_policy(pol, xs)
    assert trace[-1]["total"] == pytest.approx(want)
    assert len(trace) == len(xs) or trace[-1]["action"] == "lock"


@pytest.mark.parametrize("xs,want", [([0.6, 0.9], 1.5), ([0.9, 0.6], 1.8), ([1, 1, 1], 3.0)])
def test_prophet_value(xs, want):
    assert prophet_value(xs) == pytest.approx(want)


def test_run_policy_length_mismatch():
    pol = ThresholdPolicy(2, np.zeros(2), "manual")
    with pytest.raises(ValueError):
        run_policy(pol, [1.0])


def test_threshold_policy_validation_and_roundtrip():
    with pytest.raises(ValueError):
        ThresholdPolicy(2, np.array([0.1]), "x")
    with pytest.raises(ValueError):
        ThresholdPolicy(1, np.array([-0.1]), "x")
    pol = simple_policy(E, 7, 2.5)
    back = ThresholdPolicy.loads(pol.dumps())
    assert back == pol and back.theta.tolist() == pol.theta.tolist()


def test_policy_from_name():
    assert policy_from_name("simple", U, 10).label == "simple"
    assert policy_from_name("onl", U, 10).label == "onl"
    assert policy_from_name("optimal", U, 10).theta[-1] == 0.0
    with pytest.raises(ValueError):
        policy_from_name("greedy", U, 10)


def test_expected_policy_value_matches_dp():
    for d in (U, E):
        dp = compute_dp(d, 25)
        assert expected_policy_value(optimal_policy(dp), d) == pytest.approx(dp.G[25], rel=1e-10)


def test_expected_policy_value_matches_discrete_oracle():
    d = Discrete((0.0, 1.0), (0.5, 0.5))
    pol = ThresholdPolicy(2, np.array([0.5, 0.0]), "manual")
    assert exact_policy_value(pol, d, 2) == pytest.approx(1.25)
    assert expected_policy_value(pol, d) == pytest.approx(1.25)
    # SIMPLE(a=1), n=2: theta = quantile(0.5) = 0.  Draw 1 locks; draw 0 then takes the next draw.
    simple = simple_policy(d, 2, 1.0)
    assert simple.theta.tolist() == [0.0, 0.0]
    hand = 0.5 * (1 * 2) + 0.5 * (0 + 0.5)
    assert exact_policy_value(simple, d, 2) == pytest.approx(hand)


@settings(max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8))
def test_optimal_dominates_other_policies(seed, n):
    from pot.oracle import random_discrete
    d = random_discrete(np.random.default_rng(seed), max_support=4)
    best = compute_dp(d, n).G[n]
    for pol in (onl_policy(d, n), simple_policy(d, n, 0.5 * n)):
        assert exact_policy_value(pol, d, n) <= best + 1e-9

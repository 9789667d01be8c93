"""Stopping with lock-in durations: optimal and heuristic threshold policies,
closed-form bounds, exact oracles and paired Monte Carlo."""

__version__ = "0.1.0"

from .distributions import (
    PHI,
    Discrete,
    Distribution,
    EmptyConditionError,
    Exponential,
    ThreePointHard,
    Uniform,
    parse_distribution,
    sample,
)
from .dp_optimal import DpTable, compute_dp, g_function
from .policies import (
    ThresholdPolicy,
    expected_policy_value,
    onl_policy,
    onl_schedule,
    optimal_policy,
    prophet_value,
    run_policy,
    simple_policy,
)
from .simulation import SimResult, expected_max, expected_prophet, simulate

__all__ = [
    "PHI", "Discrete", "Distribution", "EmptyConditionError", "Exponential",
    "ThreePointHard", "Uniform", "parse_distribution", "sample",
    "DpTable", "compute_dp", "g_function",
    "ThresholdPolicy", "expected_policy_value", "onl_policy", "onl_schedule",
    "optimal_policy", "prophet_value", "run_policy", "simple_policy",
    "SimResult", "expected_max", "expected_prophet", "simulate",
]

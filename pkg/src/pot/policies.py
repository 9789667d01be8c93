"""Threshold policies and their replay on realization sequences.

All policies share one loop: in step ``i`` (1-based), while nothing is
locked in, a draw strictly above ``theta_i`` is kept for the ``n - i + 1``
remaining steps and scanning stops; otherwise the draw is kept for step
``i`` only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import Distribution
from .dp_optimal import DpTable

DEFAULT_A = 2.0
DEFAULT_C = 9.71


@dataclass(frozen=True, eq=False)
class ThresholdPolicy:
    n: int
    theta: np.ndarray
    label: str
    param: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        if theta.shape != (self.n,):
            raise ValueError(f"expected {self.n} thresholds, got shape {theta.shape}")
        if np.any(theta < 0) or np.any(np.isnan(theta)):
            raise ValueError("thresholds must be non-negative")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    def __eq__(self, other):
        if not isinstance(other, ThresholdPolicy):
            return NotImplemented
        return (self.n, self.label, self.param) == (other.n, other.label, other.param) \
            and np.array_equal(self.theta, other.theta)

    __hash__ = None

    def to_dict(self) -> dict:
        return {"label": self.label, "param": self.param, "n": self.n,
                "theta": [float(t) for t in self.theta]}

    @classmethod
    def from_dict(cls, data: dict) -> "ThresholdPolicy":
        theta = [float(t) for t in data["theta"]]
        return cls(n=int(data["n"]), theta=np.array(theta), label=str(data["label"]),
                   param=None if data.get("param") is None else float(data["param"]))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ThresholdPolicy":
        return cls.from_dict(json.loads(text))


def optimal_policy(dp: DpTable) -> ThresholdPolicy:
    n = dp.n
    theta = np.array([dp.tau[n - i] for i in range(1, n + 1)])
    return ThresholdPolicy(n=n, theta=theta, label="optimal")


def simple_policy(d: Distribution, n: int, a: float = DEFAULT_A, strict: bool = True) -> ThresholdPolicy:
    """Constant threshold at the ``1 - a/n`` quantile.

    ``strict`` enforces ``0 < a < n``.  With ``strict=False`` any ``a > 0`` is
    accepted and levels ``<= 0`` fall back to the quantile convention (so
    ``a = 2`` works for ``n in {1, 2}``).
    """
    if not a > 0 or (strict and not a < n):
        raise ValueError(f"SIMPLE needs 0 < a < n, got a={a}, n={n}")
    level = 1.0 - a / n
    theta = np.full(n, d.quantile(level))
    return ThresholdPolicy(n=n, theta=theta, label="simple", param=float(a))


def onl_schedule(n: int, c: float = DEFAULT_C) -> np.ndarray:
    """Quantile levels ``p(0..n+2)`` with ``p(0) = 1`` and ``p(n+1) = p(n+2) = 0``."""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    k = np.arange(n + 3, dtype=float)
    p = np.exp(-c * k / (n * n))
    p[0] = 1.0
    p[n + 1:] = 0.0
    return p


def onl_policy(d: Distribution, n: int, c: float = DEFAULT_C) -> ThresholdPolicy:
    p = onl_schedule(n, c)
    theta = np.array([d.quantile(p[i]) for i in range(1, n + 1)])
    return ThresholdPolicy(n=n, theta=theta, label="onl", param=float(c))


def run_policy(policy: ThresholdPolicy, xs) -> float:
    xs = [float(x) for x in xs]
    n = policy.n
    if len(xs) != n:
        raise ValueError(f"policy is for n={n} steps, got {len(xs)} values")
    total = 0.0
    for i, (x, th) in enumerate(zip(xs, policy.theta)):
        if x > th:
            return total + x * (n - i)
        total += x
    return total


def trace_policy(policy: ThresholdPolicy, xs) -> list[dict]:
    """Step-by-step record of ``run_policy`` for debugging."""
    xs = [float(x) for x in xs]
    if len(xs) != policy.n:
        raise ValueError(f"policy is for n={policy.n} steps, got {len(xs)} values")
    rows, total = [], 0.0
    for i, (x, th) in enumerate(zip(xs, policy.theta)):
        locked = x > th
        steps = policy.n - i if locked else 1
        total += x * steps
        rows.append({"step": i + 1, "x": x, "theta": float(th),
                     "action": "lock" if locked else "one", "steps": steps, "total": total})
        if locked:
            break
    return rows


def prophet_value(xs) -> float:
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("prophet_value needs at least one value")
    return float(np.sum(np.maximum.accumulate(xs)))


def run_policy_batch(theta: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Vectorised ``run_policy`` over the rows of ``X`` (trials x n)."""
    trials, n = X.shape
    hit = X > theta
    locked = hit.any(axis=1)
    first = np.where(locked, hit.argmax(axis=1), n)
    before = np.cumsum(X, axis=1)
    rows = np.arange(trials)
    # sum of x_j for j < first
    head = np.where(first > 0, before[rows, np.maximum(first - 1, 0)], 0.0)
    tail = np.where(locked, X[rows, np.minimum(first, n - 1)] * (n - first), 0.0)
    return head + tail


def prophet_value_batch(X: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(X, axis=1).sum(axis=1)


def expected_policy_value(policy: ThresholdPolicy, d: Distribution) -> float:
    """Exact expectation by the backward step recursion.

    ``V_i = (n-i+1) E[X; X > theta_i] + E[X; X <= theta_i] + F(theta_i) V_{i+1}``
    """
    n = policy.n
    mean = d.mean()
    v = 0.0
    for i in range(n, 0, -1):
        th = float(policy.theta[i - 1])
        above = d.moment_above(th)
        v = (n - i + 1) * above + (mean - above) + float(d.cdf(th)) * v
    return v


def policy_from_name(name: str, d: Distribution, n: int, a: float = DEFAULT_A,
                     c: float = DEFAULT_C) -> ThresholdPolicy:
    from .dp_optimal import compute_dp

    if name == "optimal":
        return optimal_policy(compute_dp(d, n))
    if name == "simple":
        return simple_policy(d, n, a)
    if name == "onl":
        return onl_policy(d, n, c)
    raise ValueError(f"unknown policy {name!r}")


def _finite(x: float) -> bool:
    return math.isfinite(x)

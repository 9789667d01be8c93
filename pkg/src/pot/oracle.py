"""Brute-force reference values on discrete instances.

Nothing here relies on the threshold structure: the optimum maximises over
every duration, policies are evaluated atom by atom, and enumeration walks
all outcome sequences.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import Discrete
from .policies import ThresholdPolicy, prophet_value_batch, run_policy_batch

MAX_SUPPORT = 16
MAX_N = 500
MAX_SEQUENCES = 10**6
LOG_SPACE_ABOVE = 10**4
ENUM_CHUNK = 1 << 14
STRUCTURE_TOL = 1e-12


@dataclass(frozen=True)
class ExactEvalReport:
    n: int
    value: float
    structure_ok: bool
    method: str
    policy_value: float | None = None


def _check_discrete(d, n: int) -> Discrete:
    if not isinstance(d, Discrete):
        raise TypeError(f"oracle needs a discrete distribution, got {type(d).__name__}")
    if d.support_size > MAX_SUPPORT:
        raise ValueError(f"support size {d.support_size} exceeds {MAX_SUPPORT}")
    if int(n) != n or not 1 <= n <= MAX_N:
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n}")
    return d


def exact_optimal_value(d: Discrete, n: int) -> ExactEvalReport:
    """``G_k = E[max_t (t x + G_{k-t})]`` over all durations t in 1..k."""
    d = _check_discrete(d, n)
    x = np.asarray(d.values)[:, None]
    probs = d.probs
    G = np.zeros(n + 1)
    ok = True
    for k in range(1, n + 1):
        t = np.arange(1, k + 1)
        cand = t[None, :] * x + G[k - t][None, :]
        best = cand.max(axis=1)
        tol = STRUCTURE_TOL * np.maximum(1.0, np.abs(best))
        ends = np.maximum(cand[:, 0], cand[:, -1])
        ok &= bool(np.all(ends >= best - tol))
        G[k] = math.fsum(p * v for p, v in zip(probs, best))
    return ExactEvalReport(n=n, value=float(G[n]), structure_ok=ok, method="full-dp")


def exact_policy_value(policy: ThresholdPolicy, d: Discrete, n: int) -> float:
    d = _check_discrete(d, n)
    if policy.n != n:
        raise ValueError(f"policy is for n={policy.n}, asked for n={n}")
    v = 0.0
    for i in range(n, 0, -1):
        th = float(policy.theta[i - 1])
        v = math.fsum(p * (x * (n - i + 1) if x > th else x + v)
                      for x, p in zip(d.values, d.probs))
    return v


def exact_prophet_value(d: Discrete, n: int) -> float:
    """``sum_i sum_v v (F(v)^i - F(v-)^i)`` over the atoms."""
    if not isinstance(d, Discrete):
        raise TypeError(f"oracle needs a discrete distribution, got {type(d).__name__}")
    cum = np.minimum(np.cumsum(d.probs), 1.0)
    cum[-1] = 1.0
    prev = np.concatenate([[0.0], cum[:-1]])
    terms = []
    for i in range(1, n + 1):
        terms.extend(np.asarray(d.values) * (cum**i - prev**i))
    return math.fsum(terms)


def _enum_chunk(d: Discrete, n: int, start: int, stop: int, theta, log_space: bool):
    m = d.support_size
    idx = np.arange(start, stop)
    digits = np.empty((stop - start, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        digits[:, j] = idx % m
        idx //= m
    X = np.asarray(d.values)[digits]
    pr = np.asarray(d.probs)
    if log_space:
        with np.errstate(divide="ignore"):
            w = np.exp(np.log(pr)[digits].sum(axis=1))
    else:
        w = pr[digits].prod(axis=1)
    out = [math.fsum(w), math.fsum(w * prophet_value_batch(X))]
    if theta is not None:
        out.append(math.fsum(w * run_policy_batch(theta, X)))
    return out


def enumerate_small(d: Discrete, n: int, policy: ThresholdPolicy | None = None,
                    workers: int = 1) -> ExactEvalReport:
    """Walk every outcome sequence; prophet value always, policy value if given."""
    if not isinstance(d, Discrete):
        raise TypeError(f"oracle needs a discrete distribution, got {type(d).__name__}")
    total = d.support_size ** n
    if total > MAX_SEQUENCES:
        raise ValueError(f"{d.support_size}^{n} = {total} sequences exceeds {MAX_SEQUENCES}")
    theta = None
    if policy is not None:
        if policy.n != n:
            raise ValueError(f"policy is for n={policy.n}, asked for n={n}")
        theta = np.asarray(policy.theta)
    log_space = total > LOG_SPACE_ABOVE
    spans = [(s, min(s + ENUM_CHUNK, total)) for s in range(0, total, ENUM_CHUNK)]
    job = lambda sp: _enum_chunk(d, n, sp[0], sp[1], theta, log_space)  # noqa: E731
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, spans))
    else:
        parts = [job(sp) for sp in spans]
    cols = list(zip(*parts))
    prophet = math.fsum(cols[1])
    pol = math.fsum(cols[2]) if theta is not None else None
    return ExactEvalReport(n=n, value=prophet, structure_ok=True, method="enumeration",
                           policy_value=pol)


def random_discrete(rng: np.random.Generator, max_support: int = 5, scale: float = 10.0) -> Discrete:
    """Random instance with sorted distinct values and a normalised probability vector."""
    m = int(rng.integers(1, max_support + 1))
    values = np.unique(np.round(rng.random(m) * scale, 6))
    while values.size < m:
        values = np.unique(np.concatenate([values, np.round(rng.random(1) * scale, 6)]))
    p = rng.random(m) + 0.05
    p = p / p.sum()
    p[-1] = 1.0 - math.fsum(p[:-1])
    return Discrete(tuple(values), tuple(p))

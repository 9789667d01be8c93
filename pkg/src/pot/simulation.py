"""Paired Monte Carlo for policy versus prophet, plus exact prophet values.

Trial ``t`` always reads the same slice of one Philox stream keyed by the
seed: counters ``[t*S, (t+1)*S)`` with ``S = ceil(n/4)`` (each counter step
gives four doubles).  Trials are grouped into fixed blocks whose size depends
only on ``n``, and block sums are combined with ``math.fsum`` in block
order, so the worker count never changes a single bit of the result.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from .distributions import QUAD_EPSABS, QUAD_LIMIT, Discrete, Distribution, Uniform
from .policies import ThresholdPolicy, prophet_value_batch, run_policy_batch

BLOCK_DOUBLES = 1 << 21


class DivergentIntegralError(ArithmeticError):
    """Quadrature did not converge (likely an infinite expectation)."""


@dataclass(frozen=True)
class SimResult:
    trials: int
    mean_alg: float
    mean_opt: float
    se_alg: float
    se_opt: float
    ratio: float
    ratio_se: float
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _counter_steps(n: int) -> int:
    return -(-n // 4)


def uniform_block(seed: int, start: int, count: int, n: int) -> np.ndarray:
    """Uniforms for trials ``start .. start+count-1`` as a (count, n) array."""
    S = _counter_steps(n)
    bg = np.random.Philox(key=seed)
    bg.advance(start * S)
    gen = np.random.Generator(bg)
    return gen.random((count, 4 * S))[:, :n]


def _block_size(n: int) -> int:
    return max(1, BLOCK_DOUBLES // (4 * _counter_steps(n)))


def _blocks(trials: int, n: int):
    b = _block_size(n)
    return [(s, min(b, trials - s)) for s in range(0, trials, b)]


def _block_sums(theta, d, seed, n, start, count):
    X = d.inverse_transform(uniform_block(seed, start, count, n))
    X = np.asarray(X, dtype=float)
    alg = run_policy_batch(theta, X)
    opt = prophet_value_batch(X)
    return (alg.sum(), opt.sum(), (alg * alg).sum(), (opt * opt).sum(), (alg * opt).sum())


def simulate(policy: ThresholdPolicy, d: Distribution, n: int, trials: int, seed: int,
             workers: int = 1) -> SimResult:
    """Paired estimate of E[ALG], E[OPT] and their ratio of means."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if policy.n != n:
        raise ValueError(f"policy is for n={policy.n}, simulation asked for n={n}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    theta = np.asarray(policy.theta)
    blocks = _blocks(trials, n)
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _block_sums(theta, d, seed, n, *b), blocks))
    else:
        parts = [_block_sums(theta, d, seed, n, *b) for b in blocks]
    sa, so, saa, soo, sao = (math.fsum(float(p[j]) for p in parts) for j in range(5))
    return summarize(trials, sa, so, saa, soo, sao, seed)


def summarize(T: int, sa: float, so: float, saa: float, soo: float, sao: float, seed: int) -> SimResult:
    ma, mo = sa / T, so / T
    if T > 1:
        va = max(saa - T * ma * ma, 0.0) / (T - 1)
        vo = max(soo - T * mo * mo, 0.0) / (T - 1)
        cov = (sao - T * ma * mo) / (T - 1)
    else:
        va = vo = cov = 0.0
    ratio = ma / mo if mo > 0 else math.nan
    # delta method for a ratio of paired means
    if mo > 0:
        vr = (va - 2.0 * ratio * cov + ratio * ratio * vo) / (mo * mo * T)
        ratio_se = math.sqrt(max(vr, 0.0))
    else:
        ratio_se = math.nan
    return SimResult(trials=T, mean_alg=ma, mean_opt=mo, se_alg=math.sqrt(va / T),
                     se_opt=math.sqrt(vo / T), ratio=ratio, ratio_se=ratio_se, seed=seed)


def expected_max(d: Distribution, i: int) -> float:
    """E[max of i draws] = lower + int_lower^inf (1 - F(x)^i) dx."""
    if i < 1:
        raise ValueError(f"need at least one draw, got {i}")
    if isinstance(d, Uniform):
        return d.lo + (d.hi - d.lo) * i / (i + 1)
    if isinstance(d, Discrete):
        return _discrete_max(d, i)
    lo, hi = d.lower, d.upper

    def integrand(x):
        F = float(d.cdf(x))
        if F <= 0.0:
            return 1.0
        return -math.expm1(i * math.log(F))

    val, _, info, *rest = integrate.quad(integrand, lo, hi, epsabs=QUAD_EPSABS,
                                         limit=QUAD_LIMIT, full_output=1)
    if rest:
        raise DivergentIntegralError(f"E[max of {i}] did not converge for {d.describe()}: {rest[0]}")
    return lo + val


def _discrete_max(d: Discrete, i: int) -> float:
    cum = np.concatenate([[0.0], np.minimum(np.cumsum(d.probs), 1.0)])
    cum[-1] = 1.0
    return math.fsum(v * (cum[j + 1] ** i - cum[j] ** i) for j, v in enumerate(d.values))


def expected_prophet(d: Distribution, n: int) -> float:
    """E[sum of prefix maxima] over n draws."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return math.fsum(expected_max(d, i) for i in range(1, n + 1))

"""Closed forms for the three-point instance {0, 1, phi*n}.

Probabilities: phi*n w.p. 1/n^2, 1 w.p. 1/sqrt(n), 0 otherwise.  While at
most ``k'+1`` steps remain, any positive draw is kept to the end, which gives

    E[ALG_k] = C * (k + (q0^k - 1) * D),   q0 = 1 - 1/sqrt(n) - 1/n^2,

with ``C = (phi n + n sqrt n) / (1 + n sqrt n)`` and
``D = (n^2 - n sqrt n - 1) / (1 + n sqrt n)``.  Before that only phi*n
locks in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..distributions import PHI
from .series import arith_geom_sum, geom_sum, one_minus_geom_sum

MIN_N = 4


@dataclass(frozen=True)
class HardInstanceEval:
    n: int
    phi: float
    kprime: int
    e_alg: float
    e_opt: float
    ratio: float

    def to_dict(self) -> dict:
        return {"n": self.n, "phi": self.phi, "kprime": self.kprime,
                "e_alg": self.e_alg, "e_opt": self.e_opt, "ratio": self.ratio}


def _check(n: int) -> int:
    if int(n) != n or n < MIN_N:
        raise ValueError(f"hard instance needs integer n >= {MIN_N}, got {n}")
    return int(n)


def _consts(n: int):
    rn = math.sqrt(n)
    den = 1.0 + n * rn
    C = (PHI * n + n * rn) / den
    C_minus_1 = (PHI * n - 1.0) / den
    D = (n * n - n * rn - 1.0) / den
    log_q0 = math.log1p(-1.0 / rn - 1.0 / (n * n))
    return C, C_minus_1, D, log_q0


def small_k_value(n: int, k: int) -> float:
    """E[ALG_k] for k <= k'+1 (positive draws lock in)."""
    n = _check(n)
    C, _, D, log_q0 = _consts(n)
    return C * (k + math.expm1(k * log_q0) * D)


def _excess(n: int, k: int) -> float:
    # E[ALG_k] - k, written to avoid the C*k - k cancellation
    C, C1, D, log_q0 = _consts(n)
    return C1 * k + C * D * math.expm1(k * log_q0)


def hard_kprime(n: int, full_scan: bool = False) -> int:
    """Largest k in [0, n] with E[ALG_k] <= k.

    The excess is convex in k and zero at k=0, so the sign changes at most
    once; a binary search suffices.  ``full_scan`` checks every k instead.
    """
    n = _check(n)
    if full_scan:
        k = np.arange(n + 1, dtype=float)
        C, C1, D, log_q0 = _consts(n)
        h = C1 * k + C * D * np.expm1(k * log_q0)
        ok = np.flatnonzero(h <= 0.0)
        return int(ok.max())
    if _excess(n, n) <= 0.0:
        return n
    lo, hi = 0, n  # h(lo) <= 0 < h(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _excess(n, mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def _log_rho(n: int) -> float:
    return math.log1p(-1.0 / (n * n))


def hard_instance_alg(n: int, kprime: int | None = None) -> float:
    """Expected value of the optimal online policy on the instance.

    The first ``n-k'-1`` steps only lock in phi*n; the remaining ``k'+1``
    steps follow the small-k closed form.
    """
    n = _check(n)
    kp = hard_kprime(n) if kprime is None else int(kprime)
    m = n - kp - 1
    a = -_log_rho(n)
    tail_k = min(kp + 1, n)
    lead = 0.0
    if m > 0:
        lead = (PHI * (n + 1) / n + 1.0 / math.sqrt(n)) * geom_sum(a, m) \
            - PHI / n * arith_geom_sum(a, m)
    return lead + math.exp(-a * max(m, 0)) * small_k_value(n, tail_k)


def hard_instance_opt(n: int) -> float:
    """Expected sum of prefix maxima, summed per step."""
    n = _check(n)
    a_rho = -_log_rho(n)
    a_q0 = -math.log1p(-1.0 / math.sqrt(n) - 1.0 / (n * n))
    s1 = one_minus_geom_sum(a_rho, n)          # sum (1 - rho^i)
    s_rho = n - s1                             # sum rho^i
    s_q0 = math.exp(-a_q0) * geom_sum(a_q0, n)
    return PHI * n * s1 + s_rho - s_q0


def hard_instance_ratio(n: int) -> HardInstanceEval:
    n = _check(n)
    kp = hard_kprime(n)
    e_alg = hard_instance_alg(n, kp)
    e_opt = hard_instance_opt(n)
    return HardInstanceEval(n=n, phi=PHI, kprime=kp, e_alg=e_alg, e_opt=e_opt,
                            ratio=e_alg / e_opt)


def hard_instance_alg_direct(n: int, kprime: int | None = None) -> float:
    """Same quantity by a plain loop with compensated summation."""
    n = _check(n)
    kp = hard_kprime(n, full_scan=True) if kprime is None else int(kprime)
    m = n - kp - 1
    lr = _log_rho(n)
    i = np.arange(1, max(m, 0) + 1, dtype=float)
    terms = np.exp((i - 1) * lr) * (PHI * (n - i + 1) / n + 1.0 / math.sqrt(n))
    C, _, D, log_q0 = _consts(n)
    k = min(kp + 1, n)
    tail = C * (k + (math.exp(k * log_q0) - 1.0) * D)
    return math.fsum(terms) + math.exp(max(m, 0) * lr) * tail


def hard_instance_opt_direct(n: int) -> float:
    n = _check(n)
    i = np.arange(1, n + 1, dtype=float)
    rho_i = np.exp(i * _log_rho(n))
    q0_i = np.exp(i * math.log1p(-1.0 / math.sqrt(n) - 1.0 / (n * n)))
    return math.fsum(PHI * n * (-np.expm1(i * _log_rho(n))) + rho_i - q0_i)


def paper_alg_variant(n: int) -> float:
    """The E[ALG_n] assembly with ``E[ALG_{k'}]`` as the tail term, kept to
    show how far it sits from the exact optimum."""
    n = _check(n)
    kp = hard_kprime(n)
    m = n - kp - 1
    a = -_log_rho(n)
    lead = 0.0
    if m > 0:
        lead = (PHI * (n + 1) / n + 1.0 / math.sqrt(n)) * geom_sum(a, m) \
            - PHI / n * arith_geom_sum(a, m)
    return lead + math.exp(-a * max(m, 0)) * small_k_value(n, kp)

"""Coefficient tables for the step-dependent quantile policy.

With ``p(k) = exp(-c k / n^2)`` (``p(0) = 1``, ``p(n+1) = p(n+2) = 0``) the
policy's value is ``sum_k alpha_k m_k`` and the prophet's value is at most
``sum_k alpha*_k m_k``, where ``m_k`` is the conditional mean of the band
``(delta_{p(k+1)}, delta_{p(k)}]``.

Everything is evaluated in O(n) from closed-form sums, with the p-values
carried as exponents (``inf`` for p = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..policies import onl_schedule
from .series import arith_geom_sum_array, geom_sum_array


@dataclass(frozen=True)
class AlphaTable:
    n: int
    c: float
    alpha: np.ndarray
    alpha_star: np.ndarray
    prefix_alpha: np.ndarray
    prefix_alpha_star: np.ndarray
    min_ratio: float
    argmin_s: int

    @property
    def prefix_ratio(self) -> np.ndarray:
        return self.prefix_alpha / self.prefix_alpha_star

    def rows(self):
        r = self.prefix_ratio
        for s in range(self.n + 1):
            yield s, float(self.prefix_alpha[s]), float(self.prefix_alpha_star[s]), float(r[s])


def p_exponents(n: int, c: float) -> np.ndarray:
    """Exponents ``a_k`` with ``p(k) = exp(-a_k)`` for k = 0..n+2."""
    k = np.arange(n + 3, dtype=float)
    a = c * k / (n * n)
    a[n + 1:] = np.inf
    return a


def _band_terms(n: int, aq: np.ndarray, ar: np.ndarray) -> np.ndarray:
    """``sum_{i=1}^n (q^i - r^i) - (q - r) sum_{i=1}^n i r^(i-1)`` per entry."""
    q = np.exp(-aq)
    r = np.exp(-ar)
    sq = q * geom_sum_array(aq, n)
    sr = r * geom_sum_array(ar, n)
    return (sq - sr) - (q - r) * arith_geom_sum_array(ar, n)


def alpha_coefficients(n: int, c: float) -> np.ndarray:
    a = p_exponents(n, c)
    p = np.exp(-a)
    i = np.arange(1, n + 1, dtype=float)
    P = np.exp(-c * i * (i - 1) / (2.0 * n * n))
    head = np.concatenate([[0.0], np.cumsum(P)])            # sum_{i<=k} P_i
    w = (n - i + 1) * P
    tail = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])  # sum_{i>k} (n-i+1) P_i
    dp = p[: n + 1] - p[1: n + 2]
    return dp * (head + tail)


def alpha_star_coefficients(n: int, c: float) -> np.ndarray:
    a = p_exponents(n, c)
    p = np.exp(-a)
    # band term T(j) pairs q = p(j), r = p(j+1), for j = 1..n+1
    T = _band_terms(n, a[1: n + 2], a[2: n + 3])
    out = np.empty(n + 1)
    out[0] = -np.expm1(-a[1]) * n * (n + 1) / 2.0 + T[0]
    q = a[2: n + 2]
    out[1:] = (p[1: n + 1] - p[2: n + 2]) * arith_geom_sum_array(q, n) + T[1:]
    return out


def min_prefix_ratio(t: AlphaTable) -> tuple[int, float]:
    r = t.prefix_ratio
    s = int(np.argmin(r))
    return s, float(r[s])


def alpha_tables(n: int, c: float = 9.71) -> AlphaTable:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    n = int(n)
    al = alpha_coefficients(n, c)
    ast = alpha_star_coefficients(n, c)
    pa, ps = np.cumsum(al), np.cumsum(ast)
    r = pa / ps
    s = int(np.argmin(r))
    for arr in (al, ast, pa, ps):
        arr.setflags(write=False)
    return AlphaTable(n=n, c=float(c), alpha=al, alpha_star=ast, prefix_alpha=pa,
                      prefix_alpha_star=ps, min_ratio=float(r[s]), argmin_s=s)


def alpha_tables_direct(n: int, c: float = 9.71) -> tuple[np.ndarray, np.ndarray]:
    """Quadratic-time reference straight from the defining sums."""
    k = np.arange(n + 3, dtype=np.longdouble)
    p = np.exp(-np.longdouble(c) * k / (n * n))
    p[0] = 1
    p[n + 1:] = 0
    i = np.arange(1, n + 1, dtype=np.longdouble)
    prod = np.array([np.prod(p[1:j]) for j in range(1, n + 1)], dtype=np.longdouble)
    al = np.empty(n + 1, dtype=np.longdouble)
    ast = np.empty(n + 1, dtype=np.longdouble)

    def pw(x, e):
        # 0**0 = 1
        return np.where(e == 0, np.longdouble(1), x ** e)

    for kk in range(n + 1):
        inner = prod[:kk].sum() + ((n - i[kk:] + 1) * prod[kk:]).sum()
        al[kk] = (p[kk] - p[kk + 1]) * inner
        q, r = p[kk + 1], p[kk + 2]
        tail = (pw(q, i) - pw(r, i) - i * pw(r, i - 1) * (q - r))[1:].sum()
        if kk == 0:
            ast[kk] = (1 - p[1]) * n * (n + 1) / 2 + tail
        else:
            ast[kk] = (i * pw(q, i - 1) * (p[kk] - q)).sum() + tail
    return al.astype(float), ast.astype(float)


def band_means(d, n: int, c: float = 9.71) -> np.ndarray:
    """``E[x | delta_{p(k+1)} < x <= delta_{p(k)}]`` for k = 0..n."""
    p = onl_schedule(n, c)
    out = np.empty(n + 1)
    for k in range(n + 1):
        hi = d.quantile(p[k])
        lo = d.quantile(p[k + 1]) if p[k + 1] > 0 else -np.inf
        out[k] = d.cond_mean_interval(lo, hi)
    return out


def alpha_weighted_values(d, n: int, c: float = 9.71) -> tuple[float, float]:
    """(policy value, prophet upper bound) for a continuous ``d``."""
    t = alpha_tables(n, c)
    m = band_means(d, n, c)
    return math.fsum(t.alpha * m), math.fsum(t.alpha_star * m)

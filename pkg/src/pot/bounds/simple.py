"""Coefficient bounds for the constant-threshold policy at quantile 1 - a/n.

Both bounds are multiples of ``E[x | x > delta_{1-a/n}]``; only the
coefficients are computed here.  ``n=None`` means the large-n limit of
``coefficient / n``.
"""

from __future__ import annotations

import math

from scipy.optimize import minimize_scalar

A_RANGE = (0.1, 10.0)


def _check(n, a):
    # plain closed-form evaluation: a = n and n = 1 are admitted
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    if n is not None and (int(n) != n or n < 1):
        raise ValueError(f"n must be a positive integer, got {n}")


def simple_alg_lower(n: int | None, a: float = 2.0) -> float:
    _check(n, a)
    e = math.exp(-a)
    slope = 1.0 - 1.0 / a + e / a
    if n is None:
        return slope
    return n * slope + 1.0 - (a + 2.0) * e


def simple_opt_upper(n: int | None, a: float = 2.0) -> float:
    _check(n, a)
    e = math.exp(-a)
    slope = a / 2.0 + 1.0 / a - e / a
    if n is None:
        return slope
    return n * slope + a / 2.0 + 2.0 * e - 1.0


def simple_ratio_bound(n: int | None, a: float = 2.0) -> float:
    return simple_alg_lower(n, a) / simple_opt_upper(n, a)


def optimize_simple_a(n: int | None = None, xatol: float = 1e-10) -> tuple[float, float]:
    """Maximise the ratio bound over ``a`` by bounded Brent search."""
    lo, hi = A_RANGE
    if n is not None:
        hi = min(hi, n * (1 - 1e-12))
    res = minimize_scalar(lambda a: -simple_ratio_bound(n, a), bounds=(lo, hi),
                          method="bounded", options={"xatol": xatol})
    return float(res.x), float(-res.fun)


def theorem_constant() -> float:
    e2 = math.exp(-2.0)
    return (1.0 + e2) / (3.0 - e2)

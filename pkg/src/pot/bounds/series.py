"""Geometric and arithmetico-geometric sums in exponent form.

A ratio ``x`` in ``[0, 1]`` is passed as its exponent ``a`` with
``x = exp(-a)``; ``a = inf`` stands for ``x = 0`` (and ``0**0 = 1``).
"""

from __future__ import annotations

import math

import numpy as np

# below this value of a*m the closed forms lose digits to cancellation
SERIES_CUTOFF = 1e-3
_SERIES_TERMS = 6


def power_sum(N: int, j: int) -> int:
    """Exact ``sum_{t=0}^{N} t**j`` with ``0**0 = 1``."""
    N = int(N)
    if N < 0:
        return 0
    if j == 0:
        return N + 1
    if j == 1:
        return N * (N + 1) // 2
    if j == 2:
        return N * (N + 1) * (2 * N + 1) // 6
    if j == 3:
        return (N * (N + 1) // 2) ** 2
    if j == 4:
        return N * (N + 1) * (2 * N + 1) * (3 * N * N + 3 * N - 1) // 30
    if j == 5:
        return N * N * (N + 1) ** 2 * (2 * N * N + 2 * N - 1) // 12
    if j == 6:
        return N * (N + 1) * (2 * N + 1) * (3 * N**4 + 6 * N**3 - 3 * N + 1) // 42
    raise ValueError(f"power sums implemented for j <= 6, got {j}")


def geom_sum(a: float, m: int) -> float:
    """``sum_{i=0}^{m-1} exp(-a i)``."""
    if m <= 0:
        return 0.0
    if a == 0.0:
        return float(m)
    if math.isinf(a):
        return 1.0
    return math.expm1(-a * m) / math.expm1(-a)


def arith_geom_sum(a: float, m: int) -> float:
    """``sum_{i=1}^{m} i * exp(-a (i-1))``."""
    if m <= 0:
        return 0.0
    if math.isinf(a):
        return 1.0
    if a * m < SERIES_CUTOFF:
        # expand exp(-a t) in powers of a t, t = i - 1
        N = m - 1
        terms = []
        for j in range(_SERIES_TERMS):
            sums = power_sum(N, j + 1) + (power_sum(N, j) if j > 0 else m)
            terms.append((-a) ** j / math.factorial(j) * float(sums))
        return math.fsum(terms)
    em = math.exp(-a * m)
    d = math.expm1(-a)
    return (-math.expm1(-a * m) + m * em * d) / (d * d)


def one_minus_geom_sum(a: float, m: int) -> float:
    """``sum_{i=1}^{m} (1 - exp(-a i))``, accurate when ``a*m`` is tiny."""
    if m <= 0:
        return 0.0
    if math.isinf(a):
        return float(m)
    if a * m < SERIES_CUTOFF:
        terms = [(-1) ** (j + 1) * a**j / math.factorial(j) * float(power_sum(m, j))
                 for j in range(1, _SERIES_TERMS + 1)]
        return math.fsum(terms)
    return m - math.exp(-a) * geom_sum(a, m)


def geom_sum_array(a: np.ndarray, m: int) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if m <= 0:
        return np.zeros_like(a)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.expm1(-a * m) / np.expm1(-a)
    out[a == 0.0] = float(m)
    out[np.isinf(a)] = 1.0
    return out


def arith_geom_sum_array(a: np.ndarray, m: int) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if m <= 0:
        return np.zeros_like(a)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        d = np.expm1(-a)
        out = (-np.expm1(-a * m) + m * np.exp(-a * m) * d) / (d * d)
    out[np.isinf(a)] = 1.0
    for idx in np.flatnonzero(a * m < SERIES_CUTOFF):
        out.flat[idx] = arith_geom_sum(float(a.flat[idx]), m)
    return out

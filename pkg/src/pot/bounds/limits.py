"""Numeric convergence of (1 - 1/n^2)^(a n) and its first two corrections."""

from __future__ import annotations

import math


def limit_checks(a: float, n: int) -> tuple[float, float, float]:
    """Returns ``(r, n(r-1), n(n(r-1)+a))`` for ``r = (1-1/n^2)^(a n)``.

    Targets as n grows: ``(1, -a, a^2/2)``.
    """
    if a < 0:
        raise ValueError(f"a must be non-negative, got {a}")
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    em1 = math.expm1(a * n * math.log1p(-1.0 / (n * n)))
    first = 1.0 + em1
    second = n * em1
    third = n * (second + a)
    return first, second, third


def limit_targets(a: float) -> tuple[float, float, float]:
    return 1.0, -a, a * a / 2.0

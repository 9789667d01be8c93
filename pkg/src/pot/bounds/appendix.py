"""Constants and case-wise bound curves behind the 0.598 limit.

The curves drop the O(1)/o(1) terms, so they are diagnostics: a record of
what each case bound evaluates to at a given ``s``, never an assertion.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy.optimize import minimize_scalar

DEFAULT_EPS = 1e-3


@dataclass(frozen=True)
class AppendixConstants:
    c: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    b6: float
    b7: float
    eps: float
    eps_prime: float
    eps_double_prime: float

    @property
    def cubic_coeff(self) -> float:
        c = self.c
        return 64.0 - 16.0 * c + 2.0 * c * c - 64.0 * math.exp(-c / 4.0)

    def as_dict(self) -> dict:
        return asdict(self)


def appendix_constants(c: float = 9.71, eps: float = DEFAULT_EPS) -> AppendixConstants:
    rc = math.sqrt(c / 2.0)
    K = math.sqrt(c * math.pi / 2.0) * math.erf(rc) + math.exp(-c / 2.0)
    g = math.sqrt(math.pi / (2.0 * c))
    L3 = math.erf(0.85) - 1.7 * math.exp(-0.85**2) / math.sqrt(math.pi)
    L4 = math.erf(1.35) - 2.7 * math.exp(-1.35**2) / math.sqrt(math.pi)
    b2 = K + 4 * math.exp(-c / 8) * (math.exp(3 * c / 32) - 1) - math.exp(-0.85**2) - c * g * L3
    b3 = 1 - math.exp(-c / 8) * (2 * math.exp(3 * c / 32) - 1) - g * L3
    b4 = K + 4 * math.exp(-9 * c / 32) * (math.exp(5 * c / 32) - 1) - math.exp(-1.35**2) - c * g * L4
    b5 = 1 - math.exp(-9 * c / 32) * (3 * math.exp(5 * c / 32) - 2) - g * L4
    b6 = K + 4 * math.exp(-c / 2) * (math.exp(7 * c / 32) - 1) - c * g * math.erf(rc)
    b7 = 1 - math.exp(-c / 2) * (4 * math.exp(7 * c / 32) - 3) - g * math.erf(rc)
    return AppendixConstants(c=c, b1=K - 1.0, b2=b2, b3=b3, b4=b4, b5=b5, b6=b6, b7=b7,
                             eps=eps, eps_prime=c * eps * K,
                             eps_double_prime=eps * c * (c + 2.0) / 2.0)


# per-case bounds as functions of (n, s); each returns (offline_upper, online_lower)

def _tail_offline(k: AppendixConstants, n, s):
    return n - n * n / (k.c * s) * (1.0 - math.exp(-k.c / 4.0))


def _case_zero(k, n, s):
    return k.c / 2.0, k.b1 - k.eps_prime


def _case_tiny(k, n, s):
    return k.c * (s + 1) / 2.0 + k.eps_double_prime, (s + 1) * k.b1 - k.eps_prime


def _case_small(k, n, s):
    c = k.c
    off = c / 2.0 * s - k.cubic_coeff / (n * c) * s * s
    on = s * (k.b1 - c * s / n * (64.0 + c) / 128.0)
    return off, on


def _case_mid_low(k, n, s):
    on = s * (k.b2 - k.c * s / n * math.exp(-0.85**2)) + n * k.b3
    return _tail_offline(k, n, s), on


def _case_mid_high(k, n, s):
    on = s * (k.b4 - k.c * s / n * math.exp(-1.35**2)) + n * k.b5
    return _tail_offline(k, n, s), on


def _case_upper(k, n, s):
    return _tail_offline(k, n, s), s * k.b6 + n * k.b7


def _case_end(k, n, s):
    return float(n), s * k.b6 + n * k.b7


def _cases(n: int, eps: float):
    en = eps * n
    return [
        ("s=0", lambda s: s == 0, _case_zero),
        ("0<s<eps*n", lambda s: 0 < s < en, _case_tiny),
        ("eps*n<=s<=n/4", lambda s: en <= s <= 0.25 * n, _case_small),
        ("n/4<=s<=n/2", lambda s: 0.25 * n <= s <= 0.5 * n and s >= 1, _case_mid_low),
        ("n/2<=s<=3n/4", lambda s: 0.5 * n <= s <= 0.75 * n and s >= 1, _case_mid_high),
        ("3n/4<=s<=n-2", lambda s: 0.75 * n <= s <= n - 2 and s >= 1, _case_upper),
        ("s>=n-1", lambda s: s >= n - 1 and s >= 1, _case_end),
    ]


def offline_general_upper(n: int, c: float, s: int) -> float | None:
    """Upper bound on the prophet prefix for s in 1..n-2."""
    if not 1 <= s <= n - 2:
        return None
    x = n * n / (c * (s + 2))
    return n + 1 - x + (x - c / 2.0 - 1.0) * math.exp(-c * (s + 2) / n)


def online_general_lower(n: int, c: float, s: int) -> float | None:
    """Lower bound on the policy prefix for 0 <= s <= n, n >= sqrt(c)."""
    if not (0 <= s <= n) or n < math.sqrt(c):
        return None
    rc = math.sqrt(c / 2.0)
    inner = ((s + 1) * (math.sqrt(c * math.pi / 2.0) * math.erf(rc) - c / n + math.exp(-c / 2.0))
             + n - math.sqrt(math.pi / (2.0 * c)) * (n + c * (s + 1)) * math.erf(rc * s / n)
             - (n + 1) * math.exp(-c * s * s / (2.0 * n * n)))
    return (1.0 - c / n) * inner


def appendix_bound_curves(n: int, c: float = 9.71, s: int = 0, eps: float = DEFAULT_EPS) -> dict:
    """Diagnostic record of every case bound that applies at ``s``.

    Cases not covering ``s`` are reported as ``None``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0 <= s <= n:
        raise ValueError(f"s must lie in [0, n], got {s}")
    k = appendix_constants(c, eps)
    cases = {}
    for label, covers, fn in _cases(n, eps):
        if not covers(s):
            cases[label] = None
            continue
        off, on = fn(k, n, s)
        cases[label] = {"offline_upper": off, "online_lower": on,
                        "ratio": on / off if off > 0 else None}
    return {
        "n": n, "c": c, "s": s, "eps": eps,
        "offline_general": offline_general_upper(n, c, s),
        "online_general": online_general_lower(n, c, s),
        "cases": cases,
    }


# limiting case ratios as functions of a = s/n

def limit_case_ratio(case: str, a: float, k: AppendixConstants) -> float:
    c = k.c
    denom_tail = 1.0 - (1.0 - math.exp(-c / 4.0)) / (c * a)
    if case == "small":
        return (k.b1 - c * (64.0 + c) / 128.0 * a) / (c / 2.0 - k.cubic_coeff / c * a)
    if case == "mid_low":
        return (a * (k.b2 - c * a * math.exp(-0.85**2)) + k.b3) / denom_tail
    if case == "mid_high":
        return (a * (k.b4 - c * a * math.exp(-1.35**2)) + k.b5) / denom_tail
    if case == "upper":
        return (a * k.b6 + k.b7) / denom_tail
    raise ValueError(f"unknown case {case!r}")


def interior_extremum(case: str, lo: float, hi: float, c: float = 9.71) -> tuple[float, float]:
    """Stationary point of a case ratio inside ``[lo, hi]`` (bounded Brent)."""
    k = appendix_constants(c)
    res = minimize_scalar(lambda a: -limit_case_ratio(case, a, k), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-12})
    return float(res.x), float(-res.fun)


def proof_case_values(c: float = 9.71) -> dict:
    """The case values from the limit argument, keyed by a short label."""
    k = appendix_constants(c, eps=0.0)
    a_low, v_low = interior_extremum("mid_low", 0.25, 0.5, c)
    a_high, v_high = interior_extremum("mid_high", 0.5, 0.75, c)
    return {
        "s=0": 2.0 * k.b1 / c,
        "small a=0.25": limit_case_ratio("small", 0.25, k),
        "mid_low a*": v_low, "mid_low a*_at": a_low,
        "mid_low a=0.25": limit_case_ratio("mid_low", 0.25, k),
        "mid_low a=0.5": limit_case_ratio("mid_low", 0.5, k),
        "mid_high a*": v_high, "mid_high a*_at": a_high,
        "mid_high a=0.5": limit_case_ratio("mid_high", 0.5, k),
        "mid_high a=0.75": limit_case_ratio("mid_high", 0.75, k),
        "upper a=0.75": limit_case_ratio("upper", 0.75, k),
        "upper a=1": limit_case_ratio("upper", 1.0, k),
        "end": k.b6 + k.b7,
    }

"""Optimal online policy via the take-all / take-one recursion.

With ``k`` steps remaining and nothing selected, the optimal rule either
keeps the current draw for all ``k`` steps (when it beats ``tau[k-1]``) or
for a single step.  That gives

    G[k] = k * E[X; X > tau] + E[X; X <= tau] + F(tau) * G[k-1],
    tau  = tau[k-1] = G[k-1] / (k-1),

evaluated with partial moments so that a zero-mass branch simply
contributes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import Distribution


@dataclass(frozen=True)
class DpTable:
    n: int
    G: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        self.G.setflags(write=False)
        self.tau.setflags(write=False)


def compute_dp(d: Distribution, n: int) -> DpTable:
    """Recursion on tau directly; ``G[k] = k * tau[k]``.

    Substituting ``G[k-1] = (k-1) tau`` into the take-all/take-one identity
    gives ``tau[k] = tau + E[(X - tau)^+] + g(tau) / k``, whose increment is
    a sum of two partial moments and vanishes exactly on degenerate draws.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    mean = d.mean()
    tau = np.zeros(n + 1)
    tau[1] = mean
    for k in range(2, n + 1):
        t = tau[k - 1]
        sf = float(d.sf(t))
        above = d.moment_above(t)
        excess = above - t * sf
        g = (mean - above) - t * (1.0 - sf)
        tau[k] = t + excess + g / k
    G = tau * np.arange(n + 1)
    return DpTable(n=n, G=G, tau=tau)


def g_function(d: Distribution, tau: float) -> float:
    """``P[X <= tau] * (E[X | X <= tau] - tau)``, zero when the event is empty."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    mass = float(d.cdf(tau))
    if mass == 0.0:
        return 0.0
    return d.moment_below(tau) - tau * mass

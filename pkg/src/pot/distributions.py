"""Value distributions for the over-time stopping model.

Every distribution here is supported on the non-negative reals and exposes
the handful of primitives the rest of the package needs: CDF, generalized
quantile, partial moments ``E[X; lo < X <= hi]``, conditional means and
inverse-transform sampling.  Densities are never used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

PHI = (1.0 + math.sqrt(5.0)) / 2.0

QUAD_EPSABS = 1e-10
QUAD_LIMIT = 200


class EmptyConditionError(ValueError):
    """Raised when conditioning on an event of probability zero."""


class Distribution:
    """Base class; subclasses override the closed forms they have.

    The generic partial moment uses the tail-integral identity
    ``E[X; lo < X <= hi] = lo*(F(hi) - F(lo)) + int_lo^hi (F(hi) - F(x)) dx``,
    so only ``cdf`` is strictly required.
    """

    kind = "abstract"
    discrete = False

    # -- required -----------------------------------------------------
    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, p: float) -> float:
        raise NotImplementedError

    @property
    def lower(self) -> float:
        return 0.0

    @property
    def upper(self) -> float:
        return math.inf

    # -- derived ------------------------------------------------------
    def sf(self, x):
        return 1.0 - self.cdf(x)

    def mass_between(self, lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        return float(self.cdf(hi) - self.cdf(lo)) if math.isfinite(hi) else float(self.sf(lo))

    def moment_between(self, lo: float, hi: float) -> float:
        """E[X; lo < X <= hi] by adaptive quadrature of the tail integral."""
        lo = max(lo, self.lower)
        hi = min(hi, self.upper)
        if hi <= lo:
            return 0.0
        if math.isfinite(hi):
            f_hi = float(self.cdf(hi))
            val, _ = integrate.quad(lambda x: f_hi - float(self.cdf(x)), lo, hi,
                                    epsabs=QUAD_EPSABS, limit=QUAD_LIMIT)
            return lo * (f_hi - float(self.cdf(lo))) + val
        val, _ = integrate.quad(lambda x: float(self.sf(x)), lo, math.inf,
                                epsabs=QUAD_EPSABS, limit=QUAD_LIMIT)
        return lo * float(self.sf(lo)) + val

    def moment_above(self, x: float) -> float:
        return self.moment_between(x, math.inf)

    def moment_below(self, x: float) -> float:
        return self.mean() - self.moment_above(x)

    def mean(self) -> float:
        return self.moment_between(-math.inf, math.inf)

    def cond_mean_interval(self, lo: float, hi: float) -> float:
        """E[X | lo < X <= hi]; ``lo`` may be ``-inf`` and ``hi`` may be ``inf``."""
        mass = self.mass_between(lo, hi)
        if not mass > 0.0:
            raise EmptyConditionError(f"P[{lo} < X <= {hi}] = 0 for {self.describe()}")
        return self.moment_between(lo, hi) / mass

    def cond_mean_above(self, q: float) -> float:
        return self.cond_mean_interval(q, math.inf)

    def cond_mean_below(self, q: float) -> float:
        return self.cond_mean_interval(-math.inf, q)

    def inverse_transform(self, u):
        """Map uniforms on [0, 1) to draws from this distribution."""
        return self.quantile_array(u)

    def quantile_array(self, u):
        return np.vectorize(self.quantile, otypes=[float])(u)

    def describe(self) -> str:
        raise NotImplementedError

    def _check_p(self, p: float) -> None:
        if p > 1.0:
            raise ValueError(f"quantile level must be <= 1, got {p}")


@dataclass(frozen=True)
class Uniform(Distribution):
    lo: float = 0.0
    hi: float = 1.0

    kind = "uniform"

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi < math.inf):
            raise ValueError(f"uniform needs 0 <= lo < hi < inf, got lo={self.lo}, hi={self.hi}")

    @property
    def lower(self) -> float:
        return self.lo

    @property
    def upper(self) -> float:
        return self.hi

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)[()]

    def quantile(self, p: float) -> float:
        self._check_p(p)
        if p < 0.0:
            return 0.0
        return self.lo + (self.hi - self.lo) * p

    def quantile_array(self, u):
        return self.lo + (self.hi - self.lo) * np.asarray(u, dtype=float)

    def moment_between(self, lo: float, hi: float) -> float:
        a = min(max(lo, self.lo), self.hi)
        b = min(max(hi, self.lo), self.hi)
        if b <= a:
            return 0.0
        return (b - a) * (a + b) / (2.0 * (self.hi - self.lo))

    def cond_mean_interval(self, lo: float, hi: float) -> float:
        a = min(max(lo, self.lo), self.hi)
        b = min(max(hi, self.lo), self.hi)
        if b <= a:
            raise EmptyConditionError(f"P[{lo} < X <= {hi}] = 0 for {self.describe()}")
        return 0.5 * (a + b)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def describe(self) -> str:
        return f"kind=uniform lo={self.lo!r} hi={self.hi!r}"


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float = 1.0

    kind = "exponential"

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"exponential rate must be positive, got {self.rate}")

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return (-np.expm1(-self.rate * x))[()]

    def sf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return np.exp(-self.rate * x)[()]

    def quantile(self, p: float) -> float:
        self._check_p(p)
        if p <= 0.0:
            return 0.0
        if p == 1.0:
            return math.inf
        return -math.log1p(-p) / self.rate

    def quantile_array(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.rate

    def mass_between(self, lo: float, hi: float) -> float:
        lo = max(lo, 0.0)
        if hi <= lo:
            return 0.0
        # e^{-r lo} (1 - e^{-r (hi - lo)})
        return -math.exp(-self.rate * lo) * math.expm1(-self.rate * (hi - lo))

    def moment_above(self, x: float) -> float:
        x = max(x, 0.0)
        return (x + 1.0 / self.rate) * math.exp(-self.rate * x)

    def moment_between(self, lo: float, hi: float) -> float:
        lo = max(lo, 0.0)
        if hi <= lo:
            return 0.0
        if math.isinf(hi):
            return self.moment_above(lo)
        return self.mass_between(lo, hi) * self.cond_mean_interval(lo, hi)

    def cond_mean_interval(self, lo: float, hi: float) -> float:
        lo = max(lo, 0.0)
        if hi <= lo:
            raise EmptyConditionError(f"P[{lo} < X <= {hi}] = 0 for {self.describe()}")
        if math.isinf(hi):
            return lo + 1.0 / self.rate
        width = hi - lo
        # lo + 1/r - w / (e^{r w} - 1); stays accurate as w -> 0
        return lo + 1.0 / self.rate - width / math.expm1(self.rate * width)

    def mean(self) -> float:
        return 1.0 / self.rate

    def describe(self) -> str:
        return f"kind=exponential rate={self.rate!r}"


@dataclass(frozen=True)
class Discrete(Distribution):
    """Finite-support distribution; ``values`` strictly increasing and >= 0."""

    values: tuple[float, ...]
    probs: tuple[float, ...]
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    kind = "discrete"
    discrete = True

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)
        if len(values) == 0 or len(values) != len(probs):
            raise ValueError("values and probs must be non-empty and of equal length")
        if any(p < 0.0 for p in probs):
            raise ValueError(f"probabilities must be non-negative, got {probs}")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {math.fsum(probs)!r}")
        if values[0] < 0.0:
            raise ValueError("support must be non-negative")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly increasing")
        object.__setattr__(self, "_cum", np.cumsum(probs))

    @property
    def lower(self) -> float:
        return self.values[0]

    @property
    def upper(self) -> float:
        return self.values[-1]

    @property
    def support_size(self) -> int:
        return len(self.values)

    def cdf(self, x):
        idx = np.searchsorted(self.values, np.asarray(x, dtype=float), side="right")
        out = np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)
        return np.minimum(out, 1.0)[()]

    def mass_between(self, lo: float, hi: float) -> float:
        return math.fsum(p for v, p in zip(self.values, self.probs) if lo < v <= hi)

    def moment_between(self, lo: float, hi: float) -> float:
        return math.fsum(v * p for v, p in zip(self.values, self.probs) if lo < v <= hi)

    def mean(self) -> float:
        return math.fsum(v * p for v, p in zip(self.values, self.probs))

    def quantile(self, p: float) -> float:
        self._check_p(p)
        if p < 0.0:
            return 0.0
        idx = int(np.searchsorted(self._cum, p, side="left"))
        return self.values[min(idx, len(self.values) - 1)]

    def inverse_transform(self, u):
        # band j is [cum_{j-1}, cum_j)
        idx = np.searchsorted(self._cum, np.asarray(u, dtype=float), side="right")
        return np.asarray(self.values)[np.minimum(idx, len(self.values) - 1)]

    def describe(self) -> str:
        vals = ",".join(repr(v) for v in self.values)
        probs = ",".join(repr(p) for p in self.probs)
        return f"kind=discrete values={vals} probs={probs}"


class ThreePointHard(Discrete):
    """Values ``0, 1, phi*n`` with probabilities ``1 - 1/sqrt(n) - 1/n^2, 1/sqrt(n), 1/n^2``."""

    kind = "hard"

    def __init__(self, n: int):
        if int(n) != n or n < 2:
            raise ValueError(f"hard instance needs an integer n >= 2, got {n}")
        n = int(n)
        object.__setattr__(self, "n", n)
        p_top = 1.0 / (n * n)
        p_one = 1.0 / math.sqrt(n)
        super().__init__(values=(0.0, 1.0, PHI * n), probs=(1.0 - p_one - p_top, p_one, p_top))

    def __repr__(self) -> str:
        return f"ThreePointHard(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, ThreePointHard) and other.n == self.n

    def __hash__(self):
        return hash(("hard", self.n))

    def describe(self) -> str:
        return f"kind=hard n={self.n}"


def sample(d: Distribution, stream, size=None):
    """Inverse-transform sample(s) of ``d`` from ``stream.random(size)``."""
    u = stream.random() if size is None else stream.random(size)
    out = d.inverse_transform(u)
    return float(out) if size is None else np.asarray(out, dtype=float)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def parse_distribution(text: str) -> Distribution:
    """Build a distribution from ``key=value`` tokens.

    >>> parse_distribution("kind=uniform lo=0 hi=2")
    Uniform(lo=0.0, hi=2.0)
    >>> parse_distribution("kind=hard n=1000")
    ThreePointHard(n=1000)
    """
    fields = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise ValueError(f"malformed distribution token {token!r} (expected key=value)")
        fields[key.strip().lower()] = value.strip()
    kind = fields.pop("kind", None)
    if kind is None:
        raise ValueError(f"distribution spec {text!r} has no kind=")
    try:
        if kind == "uniform":
            d = Uniform(float(fields.pop("lo", 0.0)), float(fields.pop("hi", 1.0)))
        elif kind in ("exponential", "exp"):
            d = Exponential(float(fields.pop("rate", 1.0)))
        elif kind in ("hard", "threepointhard"):
            d = ThreePointHard(int(fields.pop("n")))
        elif kind == "discrete":
            d = Discrete(tuple(_floats(fields.pop("values"))), tuple(_floats(fields.pop("probs"))))
        else:
            raise ValueError(f"unknown distribution kind {kind!r}")
    except KeyError as exc:
        raise ValueError(f"distribution kind {kind!r} is missing parameter {exc.args[0]!r}") from None
    if fields:
        raise ValueError(f"unexpected parameters for kind {kind!r}: {sorted(fields)}")
    return d

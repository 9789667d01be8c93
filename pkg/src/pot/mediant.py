"""Weighted-mediant lower bound and the ordering fact behind it.

For ``a >= 0``, ``b > 0`` and non-increasing ``w > 0``::

    sum(w*a) / sum(w*b) >= min_s sum(a[:s]) / sum(b[:s])

and, for every split point s, the weighted mean of ``w`` over the tail
(weights ``b``) is at most the weighted mean over everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

REL_TOL = 1e-12
FUZZ_MAX_N = 12
FUZZ_CHUNK = 8192


class InstanceError(ValueError):
    def __init__(self, fieldname: str, message: str):
        super().__init__(f"{fieldname}: {message}")
        self.field = fieldname


@dataclass(frozen=True)
class MediantInstance:
    a: np.ndarray
    b: np.ndarray
    w: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        b = np.array(self.b, dtype=float).ravel()
        w = np.array(self.w, dtype=float).ravel()
        n = a.size
        if n == 0:
            raise InstanceError("n", "instance must have at least one entry")
        if b.size != n:
            raise InstanceError("b", f"length {b.size} differs from len(a) = {n}")
        if w.size != n:
            raise InstanceError("w", f"length {w.size} differs from len(a) = {n}")
        if not np.all(np.isfinite(a)) or np.any(a < 0):
            raise InstanceError("a", "entries must be finite and non-negative")
        if not np.all(np.isfinite(b)) or np.any(b <= 0):
            raise InstanceError("b", "entries must be finite and positive")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InstanceError("w", "entries must be finite and positive")
        if np.any(np.diff(w) > 0):
            raise InstanceError("w", "weights must be non-increasing")
        for name, arr in (("a", a), ("b", b), ("w", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "n", n)

    def to_text(self) -> str:
        fmt = lambda v: ",".join(repr(float(x)) for x in v)  # noqa: E731
        return f"n={self.n} a={fmt(self.a)} b={fmt(self.b)} w={fmt(self.w)}"


def _slack(rhs: float) -> float:
    return REL_TOL * max(1.0, abs(rhs))


def weighted_mediant_gap(inst: MediantInstance) -> tuple[float, float, bool]:
    lhs = math.fsum(inst.w * inst.a) / math.fsum(inst.w * inst.b)
    rhs = float(np.min(np.cumsum(inst.a) / np.cumsum(inst.b)))
    return lhs, rhs, lhs >= rhs - _slack(rhs)


def prefix_ratios(a, b) -> list[float]:
    """Every prefix ratio, one at a time (the enumeration oracle)."""
    return [math.fsum(a[:s]) / math.fsum(b[:s]) for s in range(1, len(a) + 1)]


def mediant_order_check(b, w, s: int) -> bool:
    b = np.asarray(b, dtype=float)
    w = np.asarray(w, dtype=float)
    n = b.size
    if w.size != n:
        raise ValueError(f"b and w differ in length ({n} vs {w.size})")
    if not 1 <= s <= n - 1:
        raise ValueError(f"split point s must lie in [1, {n - 1}], got {s}")
    if np.any(b <= 0) or np.any(w <= 0) or np.any(np.diff(w) > 0):
        raise ValueError("need b > 0 and positive non-increasing w")
    tail = math.fsum(w[s:] * b[s:]) / math.fsum(b[s:])
    full = math.fsum(w * b) / math.fsum(b)
    return tail <= full + _slack(full)


# -- fuzzing ----------------------------------------------------------------

@dataclass
class FuzzReport:
    instances: int
    order_checks: int
    violations: list = field(default_factory=list)
    order_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.order_violations


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(int(seed) % 2**64) | (chunk << 64)))


def random_batch(rng: np.random.Generator, count: int, zero_prob: float = 0.2):
    """Padded batch: rows are instances, entries past ``n`` are zero."""
    n = rng.integers(1, FUZZ_MAX_N + 1, size=count)
    a = 1.0 - rng.random((count, FUZZ_MAX_N))
    b = 1.0 - rng.random((count, FUZZ_MAX_N))
    w = 1.0 - rng.random((count, FUZZ_MAX_N))
    a[rng.random((count, FUZZ_MAX_N)) < zero_prob] = 0.0
    live = np.arange(FUZZ_MAX_N)[None, :] < n[:, None]
    w = -np.sort(-np.where(live, w, -1.0), axis=1)
    a, b, w = (np.where(live, x, 0.0) for x in (a, b, w))
    return n, a, b, w


def batch_gap(a, b, w):
    lhs = (w * a).sum(axis=1) / (w * b).sum(axis=1)
    rhs = (np.cumsum(a, axis=1) / np.cumsum(b, axis=1)).min(axis=1)
    return lhs, rhs, lhs >= rhs - REL_TOL * np.maximum(1.0, np.abs(rhs))


def batch_order(n, b, w):
    """Order-lemma truth table, shape (count, FUZZ_MAX_N - 1); ``True`` where s is out of range."""
    wb = w * b
    tot_wb, tot_b = wb.sum(axis=1, keepdims=True), b.sum(axis=1, keepdims=True)
    tail_wb = tot_wb - np.cumsum(wb, axis=1)[:, :-1]
    tail_b = tot_b - np.cumsum(b, axis=1)[:, :-1]
    s = np.arange(1, FUZZ_MAX_N)[None, :]
    valid = s <= (n[:, None] - 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        tail = np.where(valid, tail_wb / np.where(valid, tail_b, 1.0), 0.0)
    full = tot_wb / tot_b
    ok = tail <= full + REL_TOL * np.maximum(1.0, np.abs(full))
    return ok | ~valid, int(valid.sum())


def fuzz(instances: int, seed: int, zero_prob: float = 0.2) -> FuzzReport:
    report = FuzzReport(instances=instances, order_checks=0)
    done, chunk = 0, 0
    while done < instances:
        count = min(FUZZ_CHUNK, instances - done)
        n, a, b, w = random_batch(_chunk_rng(seed, chunk), count, zero_prob)
        lhs, rhs, holds = batch_gap(a, b, w)
        for r in np.flatnonzero(~holds):
            k = int(n[r])
            report.violations.append(MediantInstance(a[r, :k], b[r, :k], w[r, :k]))
        ok, checked = batch_order(n, b, w)
        report.order_checks += checked
        for r, s in zip(*np.nonzero(~ok)):
            k = int(n[r])
            report.order_violations.append((int(s) + 1, MediantInstance(a[r, :k], b[r, :k], w[r, :k])))
        done += count
        chunk += 1
    return report

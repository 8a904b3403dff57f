"""Short-term arrival-rate estimation and Erlang-k sleep-time computation.

Arrivals are assumed Poisson over short timeframes, so the time until the
k-th next arrival is Erlang-k(lambda). The sleep time ``t_s`` is the largest
interval for which, with probability ``confidence``, fewer than k packets
arrive.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import SolverError

DEFAULT_WINDOW = 5
DEFAULT_CONFIDENCE = 0.9

_RESIDUAL_TOL = 1e-10
_MAX_ITER = 200


class RateEstimator:
    """Sliding window over the most recent inter-arrival gaps."""

    def __init__(self, window_size: int = DEFAULT_WINDOW):
        if window_size < 1:
            raise ValueError("window_size must be >= 1")
        self.window_size = window_size
        self.gaps: deque[float] = deque(maxlen=window_size)
        self.last_arrival: float | None = None

    def observe(self, t: float) -> "RateEstimator":
        last = self.last_arrival
        if last is not None:
            if t < last:
                raise ValueError(f"arrival time went backwards: {t} < {last}")
            if t > last:
                self.gaps.append(t - last)
        self.last_arrival = t
        return self

    def rate(self) -> float | None:
        """Reciprocal of the mean gap, or None before the first gap."""
        if not self.gaps:
            return None
        return len(self.gaps) / sum(self.gaps)

    def __repr__(self):
        return (f"RateEstimator(window_size={self.window_size}, "
                f"gaps={list(self.gaps)}, last_arrival={self.last_arrival})")


def observe_arrival(estimator: RateEstimator, t: float) -> RateEstimator:
    return estimator.observe(t)


def current_rate(estimator: RateEstimator) -> float | None:
    return estimator.rate()


def erlang_survival(k: int, lam: float, t: float) -> float:
    """P(X_k >= t) for X_k ~ Erlang-k(lam), i.e. P(Poisson(lam*t) < k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")
    x = lam * t
    if x == 0.0:
        return 1.0
    if x < k:
        # survival is near 1 here; sum the small complement P(N >= k) instead
        term = math.exp(k * math.log(x) - x - math.lgamma(k + 1))
        total = term
        n = k
        while term > 1e-17 * total:
            n += 1
            term *= x / n
            total += term
        return max(1.0 - total, 0.0)
    if x < 700.0:
        term = math.exp(-x)
        total = term
        for n in range(1, k):
            term *= x / n
            total += term
        return min(total, 1.0)
    # exp(-x) underflows; sum the terms in log space instead
    logx = math.log(x)
    logs = [n * logx - x - math.lgamma(n + 1) for n in range(k)]
    peak = max(logs)
    return min(math.exp(peak) * math.fsum(math.exp(v - peak) for v in logs), 1.0)


def erlang_density(k: int, lam: float, t: float) -> float:
    """Erlang-k(lam) pdf; the negated derivative of :func:`erlang_survival`."""
    if t <= 0:
        return lam if k == 1 else 0.0
    x = lam * t
    return lam * math.exp((k - 1) * math.log(x) - x - math.lgamma(k))


def solve_sleep_time(k: int, lam: float, confidence: float = DEFAULT_CONFIDENCE) -> float:
    """Return ``t`` with ``erlang_survival(k, lam, t) == confidence``.

    Newton iteration from the Erlang mean ``k / lam``, falling back to
    bisection whenever a step leaves the current bracket.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 < lam < math.inf:
        raise ValueError("lambda must be positive and finite")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")

    # survival is strictly decreasing, so f(t) = S(t) - c changes sign once
    lo, hi = 0.0, k / lam
    while erlang_survival(k, lam, hi) > confidence:
        lo, hi = hi, 2.0 * hi
    t = k / lam
    for _ in range(_MAX_ITER):
        resid = erlang_survival(k, lam, t) - confidence
        if resid > 0:
            lo = t
        else:
            hi = t
        dens = erlang_density(k, lam, t)
        step = resid / dens if dens > 0 else math.inf
        candidate = t + step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        if abs(candidate - t) <= 4 * math.ulp(t) or resid == 0.0:
            if abs(resid) < _RESIDUAL_TOL:
                return t
        t = candidate
    resid = erlang_survival(k, lam, t) - confidence
    if abs(resid) < _RESIDUAL_TOL:
        return t
    raise SolverError(
        f"sleep-time solve failed for k={k}, lambda={lam}: residual {resid:.3g}")


@dataclass(frozen=True)
class SleepTable:
    """Pre-computed ``t_s = c_k / lambda`` for a fixed k and confidence."""

    k: int
    confidence: float
    c_k: float

    def sleep_time(self, lam: float) -> float:
        return self.c_k / lam

    def pairs(self, rates):
        """(lambda, t_s) pairs suitable for loading into a card."""
        return [(lam, self.c_k / lam) for lam in rates]


def build_sleep_table(k: int, confidence: float = DEFAULT_CONFIDENCE) -> SleepTable:
    return SleepTable(k, confidence, solve_sleep_time(k, 1.0, confidence))

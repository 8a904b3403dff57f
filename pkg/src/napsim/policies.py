"""Sender-side sleep policies.

Each policy answers two questions for the engine:

* after a departure (and, for Gupta-Singh, after an arrival to an idle
  interface): stay awake or sleep for how long?
* when a sleep timer fires: wake up, or sleep again?

The pure ``on_*`` functions carry the decision rules; the policy classes
bind them to a config, a rate estimator and the small amount of state that
re-sleeping needs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

from .errors import ConfigError, ConfigWarning
from .estimator import (DEFAULT_CONFIDENCE, RateEstimator, SleepTable,
                        build_sleep_table, solve_sleep_time)
from .power import PowerVector, min_profitable_sleep


# Streamlined: consecutive re-sleeps allowed with queued traffic before a
# forced wake, so queued packets wait at most three sleep intervals.
DEFAULT_STARVATION_BOUND = 2


class PolicyKind(str, Enum):
    NONE = "none"
    GUPTA_SINGH = "gupta-singh"
    ENHANCED = "enhanced"
    STREAMLINED = "streamlined"


class TmaxSemantics(str, Enum):
    CAP = "cap"      # min(raw, t_max)
    FLOOR = "floor"  # max(raw, t_max)


class State(int, Enum):
    ACTIVE = 0
    IDLE = 1
    SLEEPING = 2
    TRANSITIONING = 3


@dataclass(frozen=True)
class Action:
    kind: str
    duration: float = 0.0

    @property
    def is_sleep(self):
        return self.kind == "sleep"


STAY = Action("stay")
WAKE = Action("wake")


def sleep_for(duration: float) -> Action:
    if not duration > 0:
        raise ValueError(f"sleep duration must be positive, got {duration}")
    return Action("sleep", duration)


@dataclass(frozen=True)
class PolicyConfig:
    """Parameters for one policy instance.

    ``sleep_trigger`` defaults to a tenth of the buffer. ``q_w`` is filled in
    by the engine from the link when left as None. ``t_max_semantics`` left
    as None means cap for the two Gupta-Singh variants and floor for
    Streamlined. ``starvation_bound=None`` lets Streamlined wait for ``q_w``
    packets indefinitely.
    """

    kind: PolicyKind
    buffer_size: int
    sleep_trigger: float | None = None
    t_max: float = 2.5e-3
    confidence: float = DEFAULT_CONFIDENCE
    q_w: float | None = None
    t_max_semantics: TmaxSemantics | None = None
    starvation_bound: int | None = DEFAULT_STARVATION_BOUND
    window_size: int = 5

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        if self.t_max_semantics is not None:
            object.__setattr__(self, "t_max_semantics",
                               TmaxSemantics(self.t_max_semantics))
        if self.buffer_size < 1:
            raise ConfigError("buffer_size must be >= 1")
        if self.sleep_trigger is None:
            object.__setattr__(self, "sleep_trigger", 0.1 * self.buffer_size)
        if not 0 < self.sleep_trigger <= self.buffer_size:
            raise ConfigError(
                f"sleep_trigger must lie in (0, B], got {self.sleep_trigger}")
        if not self.t_max > 0:
            raise ConfigError("t_max must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError("confidence must lie in (0, 1)")
        if self.starvation_bound is not None and self.starvation_bound < 0:
            raise ConfigError("starvation_bound must be >= 0")
        if self.q_w is not None and self.q_w < 0:
            raise ConfigError("q_w must be non-negative")
        if (self.kind is PolicyKind.STREAMLINED and self.q_w is not None
                and self.buffer_size <= self.q_w):
            warnings.warn(
                f"buffer B={self.buffer_size} does not exceed the wake threshold "
                f"q_w={self.q_w}; the streamlined policy needs B >> q_w",
                ConfigWarning, stacklevel=3)

    @property
    def semantics(self) -> TmaxSemantics:
        if self.t_max_semantics is not None:
            return self.t_max_semantics
        if self.kind is PolicyKind.STREAMLINED:
            return TmaxSemantics.FLOOR
        return TmaxSemantics.CAP

    def with_q_w(self, q_w: float) -> "PolicyConfig":
        return replace(self, q_w=q_w)


def bounded(raw_timer: float, cfg: PolicyConfig) -> float:
    if cfg.semantics is TmaxSemantics.CAP:
        return min(raw_timer, cfg.t_max)
    return max(raw_timer, cfg.t_max)


def spare_packets(b: float, q: int) -> int:
    # packets that can still arrive before the queue stops being below b
    return math.ceil(b - q)


def streamlined_interval(cfg: PolicyConfig, pw: PowerVector) -> float:
    return bounded(min_profitable_sleep(pw) - pw.t_delta, cfg)


def on_departure_gs(q: int, est: RateEstimator, cfg: PolicyConfig,
                    pw: PowerVector) -> Action:
    lam = est.rate()
    if lam is None or not q < cfg.sleep_trigger or lam == math.inf:
        return STAY
    t_s = solve_sleep_time(spare_packets(cfg.sleep_trigger, q), lam, cfg.confidence)
    if t_s > pw.t_delta:
        return sleep_for(bounded(t_s - pw.t_delta, cfg))
    return STAY


def on_timer_gs(q: int, previous_sleep: float) -> Action:
    return sleep_for(previous_sleep) if q == 0 else WAKE


def on_departure_enhanced(q: int, est: RateEstimator, cfg: PolicyConfig,
                          pw: PowerVector, table: SleepTable | None = None) -> Action:
    if q != 0:
        return STAY
    lam = est.rate()
    if lam is None:
        return STAY
    if table is None:
        table = build_sleep_table(spare_packets(cfg.sleep_trigger, 0), cfg.confidence)
    t_s = table.sleep_time(lam)
    if t_s >= min_profitable_sleep(pw):
        return sleep_for(bounded(t_s - pw.t_delta, cfg))
    return STAY


on_timer_enhanced = on_timer_gs


def on_departure_streamlined(q: int, cfg: PolicyConfig, pw: PowerVector) -> Action:
    if q != 0:
        return STAY
    return sleep_for(streamlined_interval(cfg, pw))


def on_timer_streamlined(q: int, cfg: PolicyConfig, pw: PowerVector,
                         resleeps: int = 0) -> Action:
    """``resleeps`` counts consecutive re-sleeps already taken with queued traffic."""
    if cfg.q_w is None:
        raise ConfigError("streamlined policy needs q_w")
    if q > cfg.q_w:
        return WAKE
    if q > 0 and cfg.starvation_bound is not None and resleeps >= cfg.starvation_bound:
        return WAKE
    return sleep_for(streamlined_interval(cfg, pw))


class Policy:
    """Stateful wrapper used by the engine; one instance per simulated interface."""

    kind = PolicyKind.NONE
    checks_idle_arrivals = False

    def __init__(self, cfg: PolicyConfig, power: PowerVector):
        self.cfg = cfg
        self.power = power
        self.estimator = RateEstimator(cfg.window_size)
        self.previous_sleep = 0.0

    def observe(self, t: float):
        self.estimator.observe(t)

    def on_departure(self, q: int) -> Action:
        return STAY

    def on_idle_arrival(self, q: int) -> Action:
        return STAY

    def on_timer(self, q: int) -> Action:
        return WAKE

    def _remember(self, action: Action) -> Action:
        if action.is_sleep:
            self.previous_sleep = action.duration
        return action


class NeverSleep(Policy):
    """Control: a card with no power management."""

    def observe(self, t):
        pass


class GuptaSingh(Policy):
    kind = PolicyKind.GUPTA_SINGH
    checks_idle_arrivals = True

    def on_departure(self, q):
        return self._remember(on_departure_gs(q, self.estimator, self.cfg, self.power))

    on_idle_arrival = on_departure

    def on_timer(self, q):
        return on_timer_gs(q, self.previous_sleep)


class Enhanced(Policy):
    kind = PolicyKind.ENHANCED

    def __init__(self, cfg, power):
        super().__init__(cfg, power)
        self.table = build_sleep_table(spare_packets(cfg.sleep_trigger, 0), cfg.confidence)

    def on_departure(self, q):
        return self._remember(
            on_departure_enhanced(q, self.estimator, self.cfg, self.power, self.table))

    def on_timer(self, q):
        return on_timer_enhanced(q, self.previous_sleep)


class Streamlined(Policy):
    kind = PolicyKind.STREAMLINED

    def __init__(self, cfg, power):
        super().__init__(cfg, power)
        if cfg.q_w is None:
            raise ConfigError("streamlined policy needs q_w")
        self.resleeps = 0

    def observe(self, t):
        pass

    def on_departure(self, q):
        return on_departure_streamlined(q, self.cfg, self.power)

    def on_timer(self, q):
        action = on_timer_streamlined(q, self.cfg, self.power, self.resleeps)
        if action.is_sleep and q > 0:
            self.resleeps += 1
        else:
            self.resleeps = 0
        return action


_CLASSES = {
    PolicyKind.NONE: NeverSleep,
    PolicyKind.GUPTA_SINGH: GuptaSingh,
    PolicyKind.ENHANCED: Enhanced,
    PolicyKind.STREAMLINED: Streamlined,
}


def make_policy(cfg: PolicyConfig, power: PowerVector) -> Policy:
    return _CLASSES[cfg.kind](cfg, power)

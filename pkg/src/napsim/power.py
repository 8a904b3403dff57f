"""Interface power model and the closed-form thresholds derived from it.

Four operating states are modelled: active (transmitting), idle (awake, not
transmitting), sleeping, and transitioning from sleeping back to awake. The
transition is billed at active power for its whole duration; every other
state change is free and instantaneous.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class PowerVector:
    """Per-state power draws in watts plus the wake-up transition time."""

    p_active: float = 2.0
    p_idle: float = 1.0
    p_sleep: float = 0.1
    t_delta: float = 0.5e-3

    def __post_init__(self):
        if not self.p_idle > self.p_sleep:
            raise ConfigError(
                f"p_idle ({self.p_idle}) must exceed p_sleep ({self.p_sleep})")
        if self.p_active < self.p_idle:
            raise ConfigError(
                f"p_active ({self.p_active}) must be >= p_idle ({self.p_idle})")
        if self.p_sleep < 0:
            raise ConfigError("p_sleep must be non-negative")
        if not self.t_delta > 0:
            raise ConfigError("t_delta must be positive")


@dataclass
class StateTimes:
    active: float = 0.0
    idle: float = 0.0
    sleeping: float = 0.0
    transitioning: float = 0.0

    @property
    def total(self) -> float:
        return self.active + self.idle + self.sleeping + self.transitioning

    def scaled(self, factor: float) -> "StateTimes":
        return StateTimes(self.active * factor, self.idle * factor,
                          self.sleeping * factor, self.transitioning * factor)


def min_profitable_sleep(power: PowerVector) -> float:
    """Shortest sleep span (timer plus wake-up) that breaks even with idling.

    Any span strictly longer than this uses less energy than staying idle.
    """
    denom = power.p_idle - power.p_sleep
    if denom <= 0:
        raise ConfigError("p_idle must exceed p_sleep")
    return power.t_delta * (power.p_active - power.p_sleep) / denom


def wake_threshold(capacity: float, t_delta: float, packet_size: float) -> float:
    """Queue length, in packets, whose transmission time equals ``t_delta``.

    Kept fractional; callers wake on ``q > wake_threshold(...)``.
    """
    if capacity <= 0:
        raise ConfigError("capacity must be positive")
    if packet_size <= 0:
        raise ConfigError("packet_size must be positive")
    return capacity * t_delta / (8.0 * packet_size)


def energy_of(times: StateTimes, power: PowerVector) -> float:
    """Joules drawn over a state-time decomposition."""
    return ((times.active + times.transitioning) * power.p_active
            + times.idle * power.p_idle
            + times.sleeping * power.p_sleep)


def baseline_energy(busy: float, total: float, power: PowerVector) -> float:
    """Energy of a card that never sleeps, doing ``busy`` seconds of transmission."""
    if busy < 0 or busy > total:
        raise ValueError(f"need 0 <= busy <= total, got busy={busy}, total={total}")
    return busy * power.p_active + (total - busy) * power.p_idle


def savings(managed: float, baseline: float) -> float:
    """Fractional energy saved relative to ``baseline``; negative when worse."""
    if baseline <= 0:
        raise ValueError("baseline energy must be positive")
    return 1.0 - managed / baseline

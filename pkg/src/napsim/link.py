from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class LinkConfig:
    """Link rate in bits/s and nominal packet size in bytes.

    The buffer size lives on :class:`~napsim.policies.PolicyConfig`, which
    also derives the sleep trigger from it.
    """

    capacity: float = 1e9
    packet_size: int = 1000

    def __post_init__(self):
        if not self.capacity > 0:
            raise ConfigError("capacity must be positive")
        if not self.packet_size > 0:
            raise ConfigError("packet_size must be positive")

    @property
    def service_time(self) -> float:
        return 8.0 * self.packet_size / self.capacity

    def transmit_time(self, size: int) -> float:
        return 8.0 * size / self.capacity

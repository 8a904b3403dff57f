"""Arrival traces: text I/O and seeded synthetic Poisson generation.

Trace files hold one record per line, ``<timestamp-seconds>[ <size-bytes>]``.
Lines starting with ``#`` are comments; LF and CRLF endings both parse.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .link import LinkConfig

# Offered loads of the busiest and quietest reference traces.
HIGH_RHO = 0.072
LOW_RHO = 0.0013

_GEN_BLOCK = 4096


class TraceError(ValueError):
    pass


class TraceReadError(TraceError):
    """The trace file could not be opened or decoded."""


class MalformedLineError(TraceError):
    def __init__(self, lineno, line, reason):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


class DecreasingTimestampError(TraceError):
    def __init__(self, lineno, prev, cur):
        super().__init__(f"line {lineno}: timestamp {cur!r} precedes {prev!r}")
        self.lineno = lineno


class ZeroSpanError(TraceError):
    pass


@dataclass(frozen=True, eq=False)
class Trace:
    arrivals: np.ndarray
    sizes: np.ndarray | None = None
    source: str = field(default="", compare=False)

    def __post_init__(self):
        arr = np.asarray(self.arrivals, dtype=float).reshape(-1)
        object.__setattr__(self, "arrivals", arr)
        if arr.size:
            if arr[0] < 0:
                raise TraceError("timestamps must be non-negative")
            if np.any(np.diff(arr) < 0):
                raise TraceError("timestamps must be non-decreasing")
        if self.sizes is not None:
            sizes = np.asarray(self.sizes, dtype=np.int64).reshape(-1)
            if sizes.shape != arr.shape:
                raise TraceError("sizes and arrivals differ in length")
            if np.any(sizes <= 0):
                raise TraceError("packet sizes must be positive")
            object.__setattr__(self, "sizes", sizes)

    def __len__(self):
        return int(self.arrivals.size)

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        if not np.array_equal(self.arrivals, other.arrivals):
            return False
        if self.sizes is None or other.sizes is None:
            return self.sizes is None and other.sizes is None
        return np.array_equal(self.sizes, other.sizes)

    @property
    def span(self) -> float:
        return float(self.arrivals[-1] - self.arrivals[0]) if len(self) else 0.0


def parse_trace(text: str, source: str = "") -> Trace:
    times, sizes = [], []
    prev = None
    for lineno, raw in enumerate(io.StringIO(text, newline=None), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) > 2:
            raise MalformedLineError(lineno, line, "expected 1 or 2 fields")
        try:
            t = float(fields[0])
        except ValueError:
            raise MalformedLineError(lineno, line, "bad timestamp") from None
        if not np.isfinite(t) or t < 0:
            raise MalformedLineError(lineno, line, "timestamp must be finite and >= 0")
        if prev is not None and t < prev:
            raise DecreasingTimestampError(lineno, prev, t)
        prev = t
        times.append(t)
        if len(fields) == 2:
            try:
                size = int(fields[1])
            except ValueError:
                raise MalformedLineError(lineno, line, "bad packet size") from None
            if size <= 0:
                raise MalformedLineError(lineno, line, "packet size must be positive")
            sizes.append(size)
    if sizes and len(sizes) != len(times):
        raise TraceError("either every record or none must carry a packet size")
    return Trace(np.array(times, dtype=float),
                 np.array(sizes, dtype=np.int64) if sizes else None, source)


def load_trace(path) -> Trace:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise TraceReadError(f"cannot read trace {path}: {exc}") from exc
    return parse_trace(text, source=str(path))


def format_trace(trace: Trace, header: bool = True) -> str:
    lines = []
    if header and trace.source:
        lines.append(f"# source: {trace.source}")
    if trace.sizes is None:
        lines.extend(repr(float(t)) for t in trace.arrivals)
    else:
        lines.extend(f"{float(t)!r} {int(s)}" for t, s in zip(trace.arrivals, trace.sizes))
    return "\n".join(lines) + "\n"


def save_trace(trace: Trace, path) -> None:
    Path(path).write_text(format_trace(trace), encoding="utf-8")


def gen_poisson(rate: float, duration: float, seed: int) -> Trace:
    """Poisson arrivals on ``(0, duration)``.

    Uniforms come from PCG64 (numpy's ``Generator.random``: the top 53 bits
    of each 64-bit output) and gaps from the inverse CDF ``-log1p(-u)/rate``,
    so the stream depends only on the seed.
    """
    if not rate > 0:
        raise ValueError("rate must be positive")
    if not duration > 0:
        raise ValueError("duration must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    blocks = []
    total = 0.0
    while total < duration:
        gaps = -np.log1p(-rng.random(_GEN_BLOCK)) / rate
        blocks.append(gaps)
        total += float(gaps.sum())
    times = np.cumsum(np.concatenate(blocks))
    times = times[times < duration]
    label = f"synthetic poisson rate={rate!r}/s duration={duration!r}s seed={seed}"
    return Trace(times, None, label)


def rate_for_occupancy(rho: float, capacity: float = 1e9, packet_size: int = 1000) -> float:
    return rho * capacity / (8.0 * packet_size)


def synthetic_trace(rho: float, duration: float = 10.0, seed: int = 42,
                    capacity: float = 1e9, packet_size: int = 1000) -> Trace:
    """Poisson stand-in for a captured trace with offered load ``rho``."""
    trace = gen_poisson(rate_for_occupancy(rho, capacity, packet_size), duration, seed)
    label = f"synthetic poisson rho={rho!r} duration={duration!r}s seed={seed}"
    return Trace(trace.arrivals, None, label)


def occupancy_of(trace: Trace, link: LinkConfig | None = None) -> float:
    """Offered load: total bits over link capacity times the trace span."""
    link = link or LinkConfig()
    if len(trace) == 0:
        raise ZeroSpanError("empty trace has no occupancy")
    span = trace.span
    if span <= 0:
        raise ZeroSpanError("trace spans zero time")
    if trace.sizes is not None:
        bits = 8.0 * float(trace.sizes.sum())
    else:
        bits = 8.0 * link.packet_size * len(trace)
    return bits / (link.capacity * span)

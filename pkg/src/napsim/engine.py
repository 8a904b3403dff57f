"""Discrete-event simulation of one sleeping network interface.

The interface owns a FIFO tail-drop buffer of ``B`` packets (the packet being
transmitted occupies a slot) and serves one packet at a time at link rate,
only while active. At any instant at most one of {service completion, sleep
timer, wake-up transition end} is pending, so the loop merges that single
event with the sorted arrival stream instead of keeping a heap. At equal
timestamps a service completion or timer fires before an arrival.

After the last arrival the buffer is drained: a sleep timer that expires
with traffic queued wakes the interface regardless of policy, and the run
ends at the first instant the buffer is empty with no service or transition
in progress (a sleeping interface ends at its timer expiry).
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import ConfigError
from .link import LinkConfig
from .policies import PolicyConfig, PolicyKind, State, make_policy
from .power import PowerVector, StateTimes, baseline_energy, energy_of, savings, wake_threshold
from .traces import Trace

_INF = math.inf
_ACTIVE, _IDLE, _SLEEPING, _TRANSITIONING = (s.value for s in State)


@dataclass
class Metrics:
    state_times: StateTimes
    energy: float
    baseline: float
    duration: float
    arrivals: int = 0
    departures: int = 0
    drops: int = 0
    drops_by_state: dict = field(default_factory=dict)
    sum_delay: float = 0.0
    max_delay: float = 0.0
    transitions: int = 0
    sleeps: int = 0
    resleeps: int = 0
    final_queue: int = 0
    # filled only when run(..., record=True)
    departure_log: list | None = None
    transition_log: list | None = None
    state_log: list | None = None

    @property
    def mean_delay(self) -> float:
        return self.sum_delay / self.departures if self.departures else math.nan

    @property
    def savings(self) -> float:
        return savings(self.energy, self.baseline) if self.baseline > 0 else math.nan

    @property
    def drops_while_sleeping(self) -> int:
        """Drops while the interface was asleep or waking up."""
        return (self.drops_by_state.get(State.SLEEPING.name.lower(), 0)
                + self.drops_by_state.get(State.TRANSITIONING.name.lower(), 0))

    def fraction(self, name: str) -> float:
        return getattr(self.state_times, name) / self.duration if self.duration else math.nan


def resolve_config(cfg: PolicyConfig, link: LinkConfig, power: PowerVector) -> PolicyConfig:
    """Fill in the wake threshold from the link when the policy needs it."""
    if cfg.kind is PolicyKind.STREAMLINED and cfg.q_w is None:
        return cfg.with_q_w(wake_threshold(link.capacity, power.t_delta, link.packet_size))
    return cfg


def run(trace: Trace, policy: PolicyConfig, link: LinkConfig | None = None,
        power: PowerVector | None = None, record: bool = False) -> Metrics:
    link = link or LinkConfig()
    power = power or PowerVector()
    if not isinstance(trace, Trace):
        raise TypeError("trace must be a Trace")
    cfg = resolve_config(policy, link, power)
    pol = make_policy(cfg, power)

    if trace.arrivals.size > 1 and (trace.arrivals[1:] < trace.arrivals[:-1]).any():
        raise ValueError("trace timestamps must be non-decreasing")
    arrivals = trace.arrivals.tolist()
    n = len(arrivals)
    if trace.sizes is not None:
        svc_times = [link.transmit_time(s) for s in trace.sizes.tolist()]
    else:
        svc_times = None
    svc_const = link.service_time
    B = cfg.buffer_size
    t_delta = power.t_delta
    check_idle = pol.checks_idle_arrivals
    observe = pol.observe

    acc = [0.0, 0.0, 0.0, 0.0]
    drops_by = [0, 0, 0, 0]
    queue = deque()
    serving = None
    service_end = _INF
    timer_end = _INF
    state = _IDLE
    since = 0.0
    now = 0.0
    i = 0
    departures = drops = transitions = sleeps = resleeps = 0
    sum_delay = 0.0
    max_delay = 0.0
    dep_log = [] if record else None
    trans_log = [] if record else None
    state_log = [] if record else None

    while True:
        next_arr = arrivals[i] if i < n else _INF
        ev = service_end if state == _ACTIVE else timer_end
        if ev == _INF and next_arr == _INF:
            break
        if ev <= next_arr:
            now = ev
            if state == _ACTIVE:
                pid, t_arr, _ = serving
                delay = now - t_arr
                sum_delay += delay
                if delay > max_delay:
                    max_delay = delay
                departures += 1
                if record:
                    dep_log.append((pid, now))
                q = len(queue)
                action = pol.on_departure(q)
                if action.kind == "sleep":
                    acc[state] += now - since
                    if record:
                        state_log.append((state, since, now))
                    since = now
                    state = _SLEEPING
                    timer_end = now + action.duration
                    sleeps += 1
                    serving = None
                    service_end = _INF
                elif q:
                    serving = queue.popleft()
                    service_end = now + serving[2]
                else:
                    acc[state] += now - since
                    if record:
                        state_log.append((state, since, now))
                    since = now
                    state = _IDLE
                    serving = None
                    service_end = _INF
            elif state == _SLEEPING:
                q = len(queue)
                if i >= n:
                    if q == 0:
                        break
                    action = None
                else:
                    action = pol.on_timer(q)
                if action is not None and action.kind == "sleep":
                    timer_end = now + action.duration
                    resleeps += 1
                else:
                    acc[state] += now - since
                    if record:
                        state_log.append((state, since, now))
                    since = now
                    state = _TRANSITIONING
                    timer_end = now + t_delta
                    transitions += 1
            else:
                # end of the wake-up transition
                if record:
                    trans_log.append((since, now))
                acc[state] += now - since
                if record:
                    state_log.append((state, since, now))
                since = now
                timer_end = _INF
                if queue:
                    state = _ACTIVE
                    serving = queue.popleft()
                    service_end = now + serving[2]
                else:
                    state = _IDLE
        else:
            now = next_arr
            pid = i
            i += 1
            q = len(queue) + (serving is not None)
            if q >= B:
                drops += 1
                drops_by[state] += 1
                continue
            observe(now)
            entry = (pid, now, svc_times[pid] if svc_times is not None else svc_const)
            if state == _IDLE:
                if check_idle:
                    action = pol.on_idle_arrival(1)
                    if action.kind == "sleep":
                        queue.append(entry)
                        acc[state] += now - since
                        if record:
                            state_log.append((state, since, now))
                        since = now
                        state = _SLEEPING
                        timer_end = now + action.duration
                        sleeps += 1
                        continue
                acc[state] += now - since
                if record:
                    state_log.append((state, since, now))
                since = now
                state = _ACTIVE
                serving = entry
                service_end = now + entry[2]
            else:
                queue.append(entry)

    acc[state] += now - since
    if record and now > since:
        state_log.append((state, since, now))
    times = StateTimes(active=acc[_ACTIVE], idle=acc[_IDLE],
                       sleeping=acc[_SLEEPING], transitioning=acc[_TRANSITIONING])
    busy = min(times.active, now)
    return Metrics(
        state_times=times,
        energy=energy_of(times, power),
        baseline=baseline_energy(busy, now, power),
        duration=now,
        arrivals=n,
        departures=departures,
        drops=drops,
        drops_by_state={s.name.lower(): drops_by[s.value] for s in State},
        sum_delay=sum_delay,
        max_delay=max_delay,
        transitions=transitions,
        sleeps=sleeps,
        resleeps=resleeps,
        final_queue=len(queue) + (serving is not None),
        departure_log=dep_log,
        transition_log=trans_log,
        state_log=state_log,
    )


class SweepError(RuntimeError):
    def __init__(self, kind, buffer_size, exc):
        super().__init__(f"run failed for policy={kind}, B={buffer_size}: {exc}")
        self.kind = kind
        self.buffer_size = buffer_size


@dataclass
class SweepCell:
    config: PolicyConfig
    metrics: Metrics

    @property
    def kind(self) -> PolicyKind:
        return self.config.kind

    @property
    def buffer_size(self) -> int:
        return self.config.buffer_size


def _run_cell(args):
    trace, cfg, link, power = args
    try:
        return run(trace, cfg, link, power)
    except Exception as exc:
        raise SweepError(cfg.kind.value, cfg.buffer_size, exc) from exc


def sweep(trace: Trace, policy_kinds, buffer_sizes, link: LinkConfig | None = None,
          power: PowerVector | None = None, workers: int | None = None,
          **policy_options) -> list[SweepCell]:
    """One independent run per (kind, B), ordered kind-major.

    ``policy_options`` are forwarded to every :class:`PolicyConfig`; a
    ``sleep_trigger_fraction`` option sets b as a fraction of each B.
    Cells run in ``workers`` processes when given; results do not depend on it.
    """
    kinds = [PolicyKind(k) for k in policy_kinds]
    sizes = list(buffer_sizes)
    if not kinds or not sizes:
        raise ConfigError("sweep needs at least one policy and one buffer size")
    link = link or LinkConfig()
    power = power or PowerVector()
    frac = policy_options.pop("sleep_trigger_fraction", None)
    configs = []
    for kind in kinds:
        for B in sizes:
            try:
                opts = dict(policy_options)
                if frac is not None:
                    opts["sleep_trigger"] = frac * B
                cfg = resolve_config(PolicyConfig(kind, B, **opts), link, power)
            except Exception as exc:
                raise SweepError(kind.value, B, exc) from exc
            configs.append(cfg)
    jobs = [(trace, cfg, link, power) for cfg in configs]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(job) for job in jobs]
    return [SweepCell(cfg, m) for cfg, m in zip(configs, results)]

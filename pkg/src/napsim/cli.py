"""Command-line front end: ``napsim {simulate,sweep,gen-trace,solve}``.

Exit codes: 0 success, 2 bad configuration, 3 trace or output I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import warnings
from pathlib import Path

from .engine import Metrics, SweepError, sweep
from .errors import ConfigError, ConfigWarning, SolverError
from .estimator import build_sleep_table, solve_sleep_time
from .link import LinkConfig
from .policies import DEFAULT_STARVATION_BOUND, PolicyConfig, PolicyKind
from .power import PowerVector
from .traces import (HIGH_RHO, Trace, TraceError, ZeroSpanError, format_trace,
                     gen_poisson, load_trace, occupancy_of, save_trace,
                     synthetic_trace)

CSV_VERSION = 1
CSV_COLUMNS = [
    "policy", "B", "b", "q_w", "rho", "t_active_s", "t_idle_s", "t_sleep_s",
    "t_transition_s", "n_sleeps", "n_transitions", "energy_J", "baseline_J",
    "savings_frac", "mean_delay_s", "added_delay_s", "max_delay_s", "drops",
    "drops_while_sleeping",
]
PLOT_METRICS = ["t_sleep_s", "t_transition_s", "t_active_s", "savings_frac",
                "added_delay_s", "drops"]
DEFAULT_SWEEP = list(range(25, 351, 25))
DEFAULT_SEED = 42
POLICY_ORDER = [k.value for k in PolicyKind]
EXIT_CONFIG = 2
EXIT_IO = 3


class IOFailure(Exception):
    pass


def _bound(text):
    if text.lower() in ("none", "unlimited"):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("starvation bound must be >= 0")
    return value


def _int_list(text):
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def _add_model_flags(p):
    g = p.add_argument_group("power and link")
    g.add_argument("--pa", type=float, default=2.0, help="active power, W")
    g.add_argument("--pi", type=float, default=1.0, help="idle power, W")
    g.add_argument("--ps", type=float, default=0.1, help="sleep power, W")
    g.add_argument("--tdelta", type=float, default=0.5e-3, help="wake-up time, s")
    g.add_argument("--capacity", type=float, default=1e9, help="link rate, bit/s")
    g.add_argument("--packet-size", type=int, default=1000, help="bytes")
    g = p.add_argument_group("policy")
    g.add_argument("--policy", action="append", choices=POLICY_ORDER,
                   help="repeatable; default: all three sleeping policies")
    g.add_argument("--b-frac", type=float, default=0.1,
                   help="sleep trigger b as a fraction of B")
    g.add_argument("--tmax", type=float, default=2.5e-3, help="seconds")
    g.add_argument("--confidence", type=float, default=0.9)
    g.add_argument("--tmax-semantics", choices=["cap", "floor"], default=None,
                   help="default: cap for gupta-singh/enhanced, floor for streamlined")
    g.add_argument("--starvation-bound", type=_bound, default=DEFAULT_STARVATION_BOUND,
                   metavar="N|none")
    g = p.add_argument_group("traffic")
    g.add_argument("--trace", type=Path, help="arrival trace file")
    g.add_argument("--gen-rho", type=float, default=None,
                   help=f"synthetic Poisson load (default {HIGH_RHO} without --trace)")
    g.add_argument("--duration", type=float, default=10.0, help="synthetic trace length, s")
    g.add_argument("--seed", type=int, default=None,
                   help=f"default $NAPSIM_SEED or {DEFAULT_SEED}")
    p.add_argument("--out", type=Path, help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="napsim", description="Opportunistic NIC sleeping simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run policies at one buffer size")
    _add_model_flags(p)
    p.add_argument("--buffer", type=int, default=225, help="buffer size B, packets")

    p = sub.add_parser("sweep", help="run policies over a range of buffer sizes")
    _add_model_flags(p)
    p.add_argument("--buffer-sweep", type=_int_list, default=DEFAULT_SWEEP,
                   help="comma-separated B values (default 25,50,...,350)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--plot-dir", type=Path, help="write per-series data and a gnuplot script")

    p = sub.add_parser("gen-trace", help="write a seeded Poisson arrival trace")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--rate", type=float, help="arrivals per second")
    grp.add_argument("--gen-rho", type=float, help="target offered load")
    p.add_argument("--capacity", type=float, default=1e9)
    p.add_argument("--packet-size", type=int, default=1000)
    p.add_argument("--duration", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("solve", help="sleep time for k spare slots, or a c_k pre-load table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="arrival rate, 1/s")
    p.add_argument("--confidence", type=float, default=0.9)
    p.add_argument("--out", type=Path)
    return parser


def resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get("NAPSIM_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"NAPSIM_SEED is not an integer: {env!r}") from None
    return DEFAULT_SEED


def _models(args):
    power = PowerVector(args.pa, args.pi, args.ps, args.tdelta)
    link = LinkConfig(args.capacity, args.packet_size)
    return power, link


def _trace(args, link, seed) -> Trace:
    if args.trace is not None:
        return load_trace(args.trace)
    rho = args.gen_rho if args.gen_rho is not None else HIGH_RHO
    if not rho > 0 or not args.duration > 0:
        raise ConfigError("--gen-rho and --duration must be positive")
    return synthetic_trace(rho, args.duration, seed, link.capacity, link.packet_size)


def _policy_options(args):
    return dict(t_max=args.tmax, confidence=args.confidence,
                t_max_semantics=args.tmax_semantics,
                starvation_bound=args.starvation_bound)


def _kinds(args):
    requested = args.policy or ["gupta-singh", "enhanced", "streamlined"]
    kinds = {PolicyKind(k) for k in requested} | {PolicyKind.NONE}
    return [k for k in PolicyKind if k in kinds]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def metrics_row(cfg: PolicyConfig, m: Metrics, rho: float, control: Metrics | None):
    st = m.state_times
    added = m.mean_delay - control.mean_delay if control is not None else math.nan
    uses_b = cfg.kind in (PolicyKind.GUPTA_SINGH, PolicyKind.ENHANCED)
    return {
        "policy": cfg.kind.value,
        "B": cfg.buffer_size,
        "b": float(cfg.sleep_trigger) if uses_b else None,
        "q_w": cfg.q_w if cfg.kind is PolicyKind.STREAMLINED else None,
        "rho": rho,
        "t_active_s": st.active,
        "t_idle_s": st.idle,
        "t_sleep_s": st.sleeping,
        "t_transition_s": st.transitioning,
        "n_sleeps": m.sleeps,
        "n_transitions": m.transitions,
        "energy_J": m.energy,
        "baseline_J": m.baseline,
        "savings_frac": m.savings,
        "mean_delay_s": m.mean_delay,
        "added_delay_s": added,
        "max_delay_s": m.max_delay,
        "drops": m.drops,
        "drops_while_sleeping": m.drops_while_sleeping,
    }


def render_csv(rows, seed, source):
    buf = io.StringIO()
    buf.write(f"# napsim-csv v{CSV_VERSION}\n")
    buf.write(f"# seed={seed}\n")
    buf.write(f"# trace={source}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write {out}: {exc}") from exc


def _rho(trace, link):
    try:
        return occupancy_of(trace, link)
    except ZeroSpanError:
        return math.nan


def cmd_simulate(args):
    seed = resolve_seed(args.seed)
    power, link = _models(args)
    trace = _trace(args, link, seed)
    rho = _rho(trace, link)
    cells = sweep(trace, _kinds(args), [args.buffer], link, power,
                  sleep_trigger_fraction=args.b_frac, **_policy_options(args))
    control = next(c.metrics for c in cells if c.kind is PolicyKind.NONE)
    rows = [metrics_row(c.config, c.metrics, rho, control) for c in cells]
    _emit(render_csv(rows, seed, trace.source), args.out)
    return 0


def cmd_sweep(args):
    seed = resolve_seed(args.seed)
    power, link = _models(args)
    trace = _trace(args, link, seed)
    rho = _rho(trace, link)
    sizes = sorted(set(args.buffer_sweep))
    if not sizes:
        raise ConfigError("--buffer-sweep is empty")
    cells = sweep(trace, _kinds(args), sizes, link, power, workers=args.jobs,
                  sleep_trigger_fraction=args.b_frac, **_policy_options(args))
    controls = {c.buffer_size: c.metrics for c in cells if c.kind is PolicyKind.NONE}
    rows = [metrics_row(c.config, c.metrics, rho, controls[c.buffer_size]) for c in cells]
    _emit(render_csv(rows, seed, trace.source), args.out)
    if args.plot_dir is not None:
        write_plot_data(rows, args.plot_dir)
    return 0


def write_plot_data(rows, directory):
    """One ``<metric>__<policy>.dat`` file per series plus ``plot.gp``."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        policies = [p for p in POLICY_ORDER if any(r["policy"] == p for r in rows)]
        script = ["set terminal pngcairo size 800,500", "set xlabel 'B (packets)'",
                  "set key outside"]
        for metric in PLOT_METRICS:
            plots = []
            for policy in policies:
                name = f"{metric}__{policy}.dat"
                lines = [f"# B {metric}"]
                lines += [f"{r['B']} {_fmt(r[metric])}" for r in rows if r["policy"] == policy]
                (directory / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
                plots.append(f"'{name}' using 1:2 with linespoints title '{policy}'")
            script += [f"set output '{metric}.png'", f"set ylabel '{metric}'",
                       "plot " + ", \\\n     ".join(plots)]
        (directory / "plot.gp").write_text("\n".join(script) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write plot data to {directory}: {exc}") from exc


def cmd_gen_trace(args):
    seed = resolve_seed(args.seed)
    if args.rate is not None:
        trace = gen_poisson(args.rate, args.duration, seed)
    else:
        rho = args.gen_rho if args.gen_rho is not None else HIGH_RHO
        trace = synthetic_trace(rho, args.duration, seed, args.capacity, args.packet_size)
    if args.out is None:
        sys.stdout.write(format_trace(trace))
    else:
        try:
            save_trace(trace, args.out)
        except OSError as exc:
            raise IOFailure(f"cannot write {args.out}: {exc}") from exc
    return 0


def cmd_solve(args):
    if args.k < 1:
        raise ConfigError("--k must be >= 1")
    if args.lam is not None:
        text = f"{solve_sleep_time(args.k, args.lam, args.confidence)!r}\n"
    else:
        lines = [f"# confidence={args.confidence!r}; t_s = c_k / lambda", "k,c_k"]
        for k in range(1, args.k + 1):
            lines.append(f"{k},{build_sleep_table(k, args.confidence).c_k!r}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep,
            "gen-trace": cmd_gen_trace, "solve": cmd_solve}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ConfigWarning)
            code = COMMANDS[args.command](args)
        seen = set()
        for w in caught:
            msg = str(w.message)
            if msg not in seen:
                seen.add(msg)
                print(f"napsim: warning: {msg}", file=sys.stderr)
        return code
    except (TraceError, IOFailure) as exc:
        print(f"napsim: {exc}", file=sys.stderr)
        return EXIT_IO
    except SweepError as exc:
        cause = exc.__cause__
        print(f"napsim: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(cause, TraceError) else EXIT_CONFIG
    except (ConfigError, SolverError, ValueError) as exc:
        print(f"napsim: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

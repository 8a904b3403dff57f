"""Exit criteria for the simulator, one verdict line each.

Run with ``pytest tests/test_acceptance.py``; the per-criterion PASS/FAIL
lines appear in the terminal summary.
"""

import math
import time
import warnings

import pytest

from acceptance_log import verdict
from napsim.cli import main
from napsim.engine import run
from napsim.estimator import solve_sleep_time
from napsim.policies import PolicyConfig
from napsim.power import (PowerVector, StateTimes, baseline_energy, energy_of,
                          min_profitable_sleep, savings, wake_threshold)
from napsim.traces import HIGH_RHO, LOW_RHO, gen_poisson, rate_for_occupancy, synthetic_trace
from oracles import bisect_sleep_time, erlang_sf
from test_engine import check_invariants

KINDS = ["gupta-singh", "enhanced", "streamlined"]
T_MAX = 2.5e-3


def test_ac1_threshold_constants():
    t_min = min_profitable_sleep(PowerVector())
    q_w = wake_threshold(1e9, 0.5e-3, 1000)
    ok = abs(t_min - 1.06e-3) <= 0.01e-3 and q_w == 62.5
    verdict("AC1 threshold constants", ok,
            f"min profitable sleep {t_min * 1e3:.4f} ms (want 1.06 +/- 0.01), q_w {q_w} (want 62.5)")


def test_ac2_solver_correctness():
    start = time.perf_counter()
    worst_rel = max(abs(solve_sleep_time(1, lam) / (-math.log(0.9) / lam) - 1)
                    for lam in (1e2, 1e3, 1e6))
    worst_resid = 0.0
    worst_gap = 0.0
    for k in range(2, 31):
        lam = 1e4
        t = solve_sleep_time(k, lam)
        worst_resid = max(worst_resid, abs(erlang_sf(k, lam, t) - 0.9))
        worst_gap = max(worst_gap, abs(t - bisect_sleep_time(k, lam)) / t)
    elapsed = time.perf_counter() - start
    ok = worst_rel < 1e-9 and worst_resid < 1e-10 and elapsed < 1.0
    verdict("AC2 solver correctness", ok,
            f"k=1 rel err {worst_rel:.2e}, k=2..30 residual {worst_resid:.2e}, "
            f"vs bisection {worst_gap:.2e}, {elapsed:.3f} s")


def test_ac3_linearity():
    start = time.perf_counter()
    worst = 0.0
    for k in (1, 5, 25):
        for a in (0.5, 2.0, 10.0):
            for lam in (1e2, 9e3, 1e6):
                base = solve_sleep_time(k, lam)
                worst = max(worst, abs(solve_sleep_time(k, a * lam) * a - base) / base)
    elapsed = time.perf_counter() - start
    verdict("AC3 linearity in 1/lambda", worst < 1e-9 and elapsed < 1.0,
            f"worst relative deviation {worst:.2e}, {elapsed:.3f} s")


def test_ac4_break_even():
    pw = PowerVector()
    span = min_profitable_sleep(pw)

    def single_sleep(total):
        managed = energy_of(StateTimes(sleeping=total - pw.t_delta,
                                       transitioning=pw.t_delta), pw)
        return managed, baseline_energy(0.0, total, pw)

    managed, base = single_sleep(span)
    rel = abs(managed - base) / base
    longer = savings(*single_sleep(1.01 * span))
    verdict("AC4 break-even sleep span", rel < 1e-12 and longer > 0,
            f"|managed-idle|/idle at break-even {rel:.1e}, savings at +1% {longer:.3e}")


def _conservation_case(idx):
    rhos = (0.001, 0.072, 0.3)
    durations = {0.001: 0.2, 0.072: 0.05, 0.3: 0.02}
    rho = rhos[idx % 3]
    B = (25, 100, 350)[(idx // 3) % 3]
    kind = KINDS[(idx // 9) % 3]
    trace = gen_poisson(rate_for_occupancy(rho), durations[rho], seed=idx)
    return trace, PolicyConfig(kind, B)


def test_ac5_conservation_suite():
    start = time.perf_counter()
    failures = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for idx in range(1000):
            trace, cfg = _conservation_case(idx)
            m = run(trace, cfg, record=True)
            try:
                check_invariants(m)
            except AssertionError as exc:
                failures.append((idx, cfg.kind.value, cfg.buffer_size, str(exc)[:80]))
    elapsed = time.perf_counter() - start
    verdict("AC5 conservation suite", not failures and elapsed < 60,
            f"1000 runs, {len(failures)} invariant violations, {elapsed:.1f} s"
            + (f"; first {failures[0]}" if failures else ""))


GRID = list(range(100, 351, 25))


@pytest.fixture(scope="module")
def reference_runs():
    start = time.perf_counter()
    results = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for label, rho in (("high", HIGH_RHO), ("low", LOW_RHO)):
            trace = synthetic_trace(rho, 10.0, seed=42)
            for B in [25] + GRID:
                results[(label, "none", B)] = run(trace, PolicyConfig("none", B))
                for kind in KINDS:
                    results[(label, kind, B)] = run(trace, PolicyConfig(kind, B))
    results["elapsed"] = time.perf_counter() - start
    return results


def _added_delay(runs, label, kind, B):
    return runs[(label, kind, B)].mean_delay - runs[(label, "none", B)].mean_delay


def test_ac6_runtime(reference_runs):
    elapsed = reference_runs["elapsed"]
    verdict("AC6 runtime", elapsed < 60, f"{elapsed:.1f} s for both 10 s traces")


@pytest.mark.parametrize("label", ["high", "low"])
def test_ac6a_transition_time(reference_runs, label):
    ratios = []
    for B in GRID:
        gs = reference_runs[(label, "gupta-singh", B)].state_times.transitioning
        enh = reference_runs[(label, "enhanced", B)].state_times.transitioning
        ratios.append(gs / enh if enh > 0 else math.inf)
    worst = min(ratios)
    verdict(f"AC6a GS/Enhanced transition time, {label} trace", worst >= 1.5,
            f"min ratio over B=100..350 is {worst:.2f} (want >= 1.5)")


def test_ac6b_gupta_singh_negative_savings(reference_runs):
    s = reference_runs[("high", "gupta-singh", 25)].savings
    # rounding noise around zero does not count as consuming more energy
    verdict("AC6b GS savings < 0 at B=25, rho=7.2%", s < -1e-12, f"savings {s:+.3e}")


def test_ac6c_savings_band(reference_runs):
    s = {k: reference_runs[("high", k, 225)].savings for k in ("enhanced", "streamlined")}
    ok = all(0.60 <= v <= 0.90 for v in s.values())
    verdict("AC6c savings in [60%, 90%] at B=225, rho=7.2%", ok,
            ", ".join(f"{k} {v:.1%}" for k, v in s.items()))


def test_ac6d_no_drops_large_buffers(reference_runs):
    drops = {(label, kind, B): reference_runs[(label, kind, B)].drops
             for label in ("high", "low") for kind in KINDS for B in GRID if B >= 225}
    total = sum(drops.values())
    verdict("AC6d zero drops for B >= 225", total == 0,
            f"{total} drops over {len(drops)} runs")


def test_ac6e_streamlined_flat_sleep(reference_runs):
    spans = {}
    for label in ("high", "low"):
        fr = [reference_runs[(label, "streamlined", B)].fraction("sleeping") for B in GRID]
        spans[label] = max(fr) - min(fr)
    ok = all(v < 0.05 for v in spans.values())
    verdict("AC6e streamlined sleep fraction flat over B=100..350", ok,
            ", ".join(f"{k} spread {v * 100:.2f} pp" for k, v in spans.items()))


def test_ac6f_added_delay_bounded(reference_runs):
    worst = {k: max(_added_delay(reference_runs, "low", k, B) for B in GRID)
             for k in ("enhanced", "streamlined")}
    ok = all(v <= 3 * T_MAX for v in worst.values())
    verdict("AC6f added delay <= 3 t_max at rho=0.13%", ok,
            ", ".join(f"{k} {v * 1e3:.2f} ms" for k, v in worst.items()))


def test_ac7_control_equivalence():
    problems = []
    for rho in (LOW_RHO, HIGH_RHO, 0.3):
        for seed in (1, 2):
            trace = synthetic_trace(rho, 0.5, seed=seed)
            for B in (350, 1000):
                m = run(trace, PolicyConfig("none", B))
                ctl = run(trace, PolicyConfig("none", B))
                added = m.mean_delay - ctl.mean_delay
                if abs(m.savings) > 1e-12 or m.drops or added != 0.0:
                    problems.append((rho, seed, B, m.savings, m.drops, added))
    verdict("AC7 never-sleep control", not problems,
            f"{len(problems)} deviating runs (savings |s| <= 1e-12, drops 0, added delay 0)")


def test_ac8_determinism(tmp_path):
    args = ["sweep", "--duration", "0.5", "--buffer-sweep", "25,100,225,350"]
    outs = []
    for i, extra in enumerate([[], [], ["--jobs", "3"]]):
        path = tmp_path / f"run{i}.csv"
        assert main(args + extra + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    verdict("AC8 byte-identical sweep CSV", outs[0] == outs[1] == outs[2],
            "serial x2 and 3-process sweep compared")

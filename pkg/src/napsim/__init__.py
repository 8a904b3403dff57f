"""Simulator for opportunistic sleeping of network interfaces."""

from .engine import Metrics, SweepCell, run, sweep
from .errors import ConfigError, ConfigWarning, SolverError
from .estimator import (RateEstimator, SleepTable, build_sleep_table, erlang_survival,
                        solve_sleep_time)
from .link import LinkConfig
from .policies import PolicyConfig, PolicyKind, TmaxSemantics
from .power import (PowerVector, StateTimes, baseline_energy, energy_of,
                    min_profitable_sleep, savings, wake_threshold)
from .traces import Trace, gen_poisson, load_trace, occupancy_of, save_trace, synthetic_trace

__version__ = "0.1.0"

# coding: utf-8

# # One simulated interface
#
# Generate a 10 s Poisson trace at 7.2 % link occupancy and replay it through
# each policy with a 225-packet buffer.

# In[1]:

from napsim import PolicyConfig, run, synthetic_trace
from napsim.traces import HIGH_RHO, occupancy_of

trace = synthetic_trace(HIGH_RHO, duration=10.0, seed=42)
print(len(trace.arrivals), "packets, occupancy", round(occupancy_of(trace), 4))


# In[2]:

control = run(trace, PolicyConfig("none", 225))
print(f"{'policy':<12} {'savings':>8} {'sleep':>6} {'trans':>6} {'drops':>5} {'added delay':>12}")
for kind in ("none", "gupta-singh", "enhanced", "streamlined"):
    m = run(trace, PolicyConfig(kind, 225))
    added = m.mean_delay - control.mean_delay
    print(f"{kind:<12} {m.savings:>8.3f} {m.fraction('sleeping'):>6.3f} "
          f"{m.fraction('transitioning'):>6.3f} {m.drops:>5d} {added * 1e3:>9.3f} ms")


# Looking inside a short run: record=True keeps per-packet departures and
# the state timeline.

# In[3]:

short = synthetic_trace(HIGH_RHO, duration=0.01, seed=1)
m = run(short, PolicyConfig("enhanced", 225), record=True)
names = ["active", "idle", "sleeping", "transitioning"]
for state, start, end in m.state_log[:12]:
    print(f"  {start * 1e3:8.3f} - {end * 1e3:8.3f} ms  {names[state]}")

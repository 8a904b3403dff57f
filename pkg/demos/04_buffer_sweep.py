# coding: utf-8

# # Buffer-size sweep
#
# Savings and delay as the buffer grows, for both traffic levels. Plots are
# drawn if matplotlib happens to be installed; otherwise a table is printed.

# In[1]:

import numpy as np

from napsim import sweep, synthetic_trace
from napsim.traces import HIGH_RHO, LOW_RHO

sizes = list(range(25, 351, 25))
kinds = ["none", "gupta-singh", "enhanced", "streamlined"]
results = {}
for label, rho in (("high", HIGH_RHO), ("low", LOW_RHO)):
    trace = synthetic_trace(rho, duration=10.0, seed=42)
    results[label] = sweep(trace, kinds, sizes)


# In[2]:

def series(cells, kind, metric):
    return np.array([metric(c.metrics) for c in cells if c.kind.value == kind])

for label, cells in results.items():
    print(f"--- {label} trace: savings by buffer size")
    print("B      " + " ".join(f"{k:>12}" for k in kinds[1:]))
    table = np.column_stack([series(cells, k, lambda m: m.savings) for k in kinds[1:]])
    for B, row in zip(sizes, table):
        print(f"{B:<6} " + " ".join(f"{v:>12.3f}" for v in row))


# In[3]:

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, (label, cells) in zip(axes, results.items()):
        for kind in kinds[1:]:
            ax.plot(sizes, series(cells, kind, lambda m: m.savings), marker="o", label=kind)
        ax.set_title(f"{label} trace")
        ax.set_xlabel("buffer size B (packets)")
        ax.set_ylabel("energy savings")
        ax.legend()
    fig.tight_layout()
    fig.savefig("buffer_sweep.png")
    print("wrote buffer_sweep.png")

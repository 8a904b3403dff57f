# coding: utf-8

# # Erlang-k sleep times
#
# With Poisson arrivals at rate lam, the time until the k-th packet is
# Erlang-k. The sleep time t_s is the span during which fewer than k packets
# arrive with 90 % probability.

# In[1]:

import math

import numpy as np

from napsim import build_sleep_table, solve_sleep_time
from napsim.estimator import erlang_survival


# For k = 1 the answer is closed form: -ln(0.9) / lam.

# In[2]:

for lam in (1e2, 1e3, 1e6):
    t = solve_sleep_time(1, lam)
    print(f"lam={lam:>9.0f}  t_s={t:.6e}  closed form={-math.log(0.9) / lam:.6e}")


# The solution scales as 1/lam, so a card only needs one constant c_k per k.

# In[3]:

table = build_sleep_table(25)
print(f"c_25 = {table.c_k:.6f}")
for lam, t_s in table.pairs([1e3, 1e4, 1e5]):
    print(f"  lam={lam:>8.0f}  t_s={t_s * 1e3:.4f} ms")


# Survival curve around the solution for k = 25, lam = 10^4.

# In[4]:

t_s = solve_sleep_time(25, 1e4)
for t in np.linspace(0.5 * t_s, 1.5 * t_s, 5):
    print(f"  t={t * 1e3:.3f} ms  P(fewer than 25 arrivals)={erlang_survival(25, 1e4, t):.4f}")

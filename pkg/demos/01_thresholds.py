# coding: utf-8

# # When is sleeping worth it?
#
# An interface that sleeps pays a fixed wake-up cost: t_delta seconds billed at
# active power. Two numbers fall out of that: the shortest sleep that beats
# staying idle, and the backlog a wake-up must have to amortise itself.

# In[1]:

from napsim import PowerVector, min_profitable_sleep, wake_threshold
from napsim.power import StateTimes, baseline_energy, energy_of, savings

pw = PowerVector()
print(pw)


# ## Break-even sleep span
#
# Any sleep (including its wake-up) shorter than this costs more energy than
# just idling through the gap.

# In[2]:

t_min = min_profitable_sleep(pw)
print(f"break-even span: {t_min * 1e3:.4f} ms")

for factor in (0.5, 1.0, 1.01, 2.0, 5.0):
    span = factor * t_min
    managed = energy_of(StateTimes(sleeping=span - pw.t_delta, transitioning=pw.t_delta), pw)
    idle = baseline_energy(0.0, span, pw)
    print(f"  {factor:>5} x break-even -> savings {savings(managed, idle):+.4f}")


# ## Wake threshold
#
# A 1 Gb/s link sending 1000-byte packets could have moved this many packets
# during one wake-up transition.

# In[3]:

print("q_w =", wake_threshold(1e9, pw.t_delta, 1000), "packets")

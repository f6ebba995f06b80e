# Two ways to reach an impact-blind equilibrium on random instances:
# the one-pass greedy construction, and round-robin improving moves from a random start.

import time
from fractions import Fraction

import numpy as np

from srsg import BLIND, ROUND_ROBIN, RandomParams, compute_ibe_greedy, is_equilibrium, random_instance, random_profile, run_dynamics, social_welfare

rows = []
for seed in range(20):
    inst = random_instance(RandomParams(8, 15, 15, 0.3, Fraction(1), seed))

    t0 = time.perf_counter()
    s_greedy, log = compute_ibe_greedy(inst)
    t1 = time.perf_counter()
    trace = run_dynamics(inst, random_profile(inst, seed), BLIND, ROUND_ROBIN, inst.n_agents ** 5)
    t2 = time.perf_counter()

    assert is_equilibrium(inst, s_greedy, BLIND)
    rows.append((float(social_welfare(inst, s_greedy)), float(social_welfare(inst, trace.final)),
                 len(trace.steps), (t1 - t0) * 1e3, (t2 - t1) * 1e3))

rows = np.array(rows)
print("mean welfare  greedy %.3f  dynamics %.3f" % tuple(rows[:, :2].mean(axis=0)))
print("dynamics steps  min %d  median %d  max %d" % (rows[:, 2].min(), np.median(rows[:, 2]), rows[:, 2].max()))
print("mean time (ms)  greedy %.2f  dynamics %.2f" % tuple(rows[:, 3:].mean(axis=0)))

# The greedy removal order: red fractions never go up.
print([str(r.red_fraction) for r in log])

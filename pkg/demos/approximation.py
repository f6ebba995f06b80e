# Exact impact-aware equilibria may not be reachable, but a 2-approximate one is:
# climb welfare measured at tau = 1 until no single move raises it.
# Starting from the greedy profile there is usually nothing left to climb,
# so we also start from a random profile.

from fractions import Fraction

from srsg import AWARE, RandomParams, brute_force_optimum, is_beta_approx_iae, is_equilibrium, random_instance, random_profile, social_welfare, welfare_ascent

for seed in range(8):
    tau = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 5), Fraction(1)][seed % 4]
    inst = random_instance(RandomParams(3, 5, 5, 0.7, tau, seed))
    opt = float(social_welfare(inst, brute_force_optimum(inst)))
    for start, init in (("greedy", None), ("random", random_profile(inst, seed))):
        s, steps = welfare_ascent(inst, init)
        print(f"seed {seed} tau {str(tau):4s} {start:6s} steps {steps:2d}"
              f"  welfare {float(social_welfare(inst, s)):.3f} / opt {opt:.3f}"
              f"  2-approx {is_beta_approx_iae(inst, s, 2)}  exact {is_equilibrium(inst, s, AWARE)}")

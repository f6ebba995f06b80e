# Two resources, eight agents, tau = 3/5.
# Three profiles of the same instance: the optimum, a stable profile under
# impact-aware moves, and one that is only stable if agents ignore their own impact.

from srsg import AWARE, BLIND, counts, figure1, format_instance, is_equilibrium, social_welfare, witness_move

fig = figure1()
inst = fig.instance
print(format_instance(inst))

for name in ("opt", "iae", "ibe"):
    s = getattr(fig, name)
    per_resource = [tuple(counts(inst, q, s)) for q in inst.resources]
    print(f"{name:4s} counts {per_resource}  welfare {social_welfare(inst, s)}"
          f"  aware-stable {is_equilibrium(inst, s, AWARE)}  blind-stable {is_equilibrium(inst, s, BLIND)}")

# The optimum is not stable: somebody wants to move.
print("deviation from opt:", witness_move(inst, fig.opt, AWARE))

# In the balanced profile an agent that counts itself would still move,
# one that only looks at the current mix would not.
print("aware deviation from ibe:", witness_move(inst, fig.ibe, AWARE))
print("blind deviation from ibe:", witness_move(inst, fig.ibe, BLIND))

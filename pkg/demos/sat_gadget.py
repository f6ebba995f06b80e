# Deciding whether every agent can reach utility tau is hard in general.
# Build the gadget for a few small formulas and compare against a SAT brute force.

from fractions import Fraction

from srsg import brute_force_sat, derived_assignment, find_all_max_profile, random_34_formula, sat_to_srsg
from srsg.reductions import CnfFormula

formulas = [CnfFormula(1, [[1], [-1]]), CnfFormula(2, [[1, 2], [-1], [-2, 1]])]
formulas += [random_34_formula(3, 5, seed) for seed in range(4)]

for phi in formulas:
    sat = brute_force_sat(phi)
    for tau in (Fraction(1), Fraction(1, 2)):
        inst = sat_to_srsg(phi, tau)
        s = find_all_max_profile(inst)
        line = f"{phi.clauses}  tau={tau}  agents={inst.n_agents}  sat={sat is not None}  all-max={s is not None}"
        if s is not None:
            line += f"  assignment={derived_assignment(phi, tau, s)}"
        print(line)

# How bad can a stable profile get? The three-resource family below
# has an impact-aware equilibrium whose welfare approaches the worst-case ratio.

from fractions import Fraction

from srsg import poa_bound, poa_family, social_welfare

for tau in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 5), Fraction(4, 5), Fraction(1)):
    print(f"tau {str(tau):4s}  bound {float(poa_bound(tau)):.4f}", end="")
    for alpha in (100, 200, 1000, 5000):
        fam = poa_family(tau, alpha)
        ratio = social_welfare(fam.instance, fam.opt) / social_welfare(fam.instance, fam.worst_iae)
        print(f"  a={alpha}: {float(ratio):.4f}", end="")
    print()

# Group sizes for one member of the family.
print(poa_family(Fraction(1, 2), 200).sizes)

"""Class groups of imaginary quadratic fields and their small torsion.

Run with:  python3 demos/01_class_groups.py
"""

from tslab.arith import factorize, fundamental_discriminants_in_range
from tslab.quadforms import class_group_structure, reduced_forms, torsion_count

# The reduced forms of discriminant -23 are the three classes of Q(sqrt -23).
D = -23
print(f"reduced forms of D = {D}:", reduced_forms(D))
G = class_group_structure(D)
print(f"h = {G.h}, structure Z/{G.elementary_divisors[0]}, generator {G.generators[0]}")

# The 2-rank is fixed by the number of prime divisors of D.
print("\n   D    h  t  h2  2^(t-1)")
for D in (-15, -84, -420, -1155, -3299):
    G = class_group_structure(D)
    t = len(factorize(D))
    print(f"{D:5d} {G.h:4d} {t:2d} {torsion_count(G, 2):3d} {2 ** (t - 1):6d}")

# Odd torsion is not controlled by genus theory.  Fields with 3-rank 2 are
# rare; list them with h_3 against |D|^(1/4).
print("\nD with 3-rank 2, |D| < 5000:")
for D in fundamental_discriminants_in_range(-5000, -3, sign="negative")[::-1]:
    G = class_group_structure(D)
    h3 = torsion_count(G, 3)
    if h3 == 9:
        print(f"{D:7d}  structure {G.elementary_divisors}  h3 / |D|^(1/4) = {h3 / abs(D) ** 0.25:.4f}")

"""Complete 2-descent on the congruent number curves y^2 = x^3 - n^2 x.

Run with:  python3 demos/02_congruent_descent.py
"""

from tslab.arith import squarefree_part
from tslab.descent import REAL, descent_setup, local_image, sel2_group
from tslab.weierstrass import WeierstrassCurve, quadratic_twist

E = WeierstrassCurve(0, 0, 0, -1, 0)
roots, G = descent_setup(E)
print("roots", roots, "bad primes", G.S)
for p in (REAL,) + G.S:
    print(f"local image at {p}: {sorted(local_image(roots, p))}")

# The twist by D is y^2 = x^3 - n^2 x with n the squarefree part of |D|.
# Torsion always contributes two Selmer dimensions; anything beyond that is
# either a point of infinite order or an element of Sha[2].
print("\n   D   n  dim Sel2  points found  point")
for D in (5, -7, -24, 17, 41, -15, 73):
    s = sel2_group(quadratic_twist(E, D))
    P = f"({s.points[0][0]}, {s.points[0][1]})" if s.points else ""
    print(f"{D:4d} {squarefree_part(abs(D)):3d} {s.dimension:7d} {s.rank_lower_bound:11d}   {P}")

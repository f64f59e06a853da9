"""Analytic Sha for rank-0 twists, checked against the 2-Selmer group.

Run with:  python3 demos/03_bsd_twists.py
"""

from tslab.bsd import verify_bsd
from tslab.weierstrass import WeierstrassCurve

E = WeierstrassCurve(0, 0, 0, -1, 0)
print("   D    L(E_D,1)      omega    prod c_p  tors  Sha_an        dim Sel2  2-part")
for D in (-3, -11, 17, -43, -68, -107, -155, 5, 41):
    r = verify_bsd(E, D, "m2")
    if r.rank_status == "1":
        print(f"{D:5d}  root number -1, L'(E_D,1) = {r.L_term.value:.8f}, dim Sel2 = {r.sel2_dim}")
        continue
    if r.rank_status == "undetermined":
        print(f"{D:5d}  root number +1 but L(E_D,1) vanishes (rank >= 2), dim Sel2 = {r.sel2_dim}")
        continue
    print(
        f"{D:5d} {r.L_term.value:11.8f} {r.omega.omega_used:10.6f} {r.tamagawa_product:6d} {r.torsion_order:5d}"
        f"  {r.sha_analytic:12.8f} {r.sel2_dim:6d}  {r.checks['two_part']}"
    )
print("\n(all Sha values assume BSD)")

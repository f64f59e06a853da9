"""Scan imaginary quadratic fields and compare the Selmer proxy with the
2-rank of the class group.

Run with:  python3 demos/04_ledger_scan.py [out.csv]
"""

import sys

from tslab.registry import load_registry
from tslab.scan import run_scan, summary_text

entry = load_registry()["m2"]
print(f"curve m2 = {list(entry.curve.ainvs)} ({entry.note})")
res = run_scan(-2000, -3, entry.curve, descent_limit=60)

print("\n    D  h2  proxy  s_bad  discrepancy  corrected")
for r in [r for r in res.rows if r.ledger][:12]:
    x = r.ledger
    print(f"{r.D:5d} {r.hm[0]:3d} {x.proxy:6d} {x.s_bad:6d} {x.discrepancy:12d} {x.corrected:10d}")
print()
print(summary_text(res.summary), end="")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(res.csv_text())
    print(f"wrote {len(res.rows)} rows to {sys.argv[1]}")

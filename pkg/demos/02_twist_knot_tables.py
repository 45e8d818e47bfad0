"""Twist-knot regression: closed-form solutions and their complex volumes.

For each twist index the defining polynomial's roots drive exact side and
region data; the corrected potential value at that data is i(vol + i cs).
The final column cross-checks the volume against the signed Bloch-Wigner
sum over the crossing octahedra.
"""

import sys

from optlim import twistknot

print(f"{'n':>2} {'t':>22} {'vol':>12} {'cs (raw)':>12} {'bw check':>12} pass")
print("-" * 68)
all_ok = True
for n in range(1, 6):
    for rec in twistknot.reproduce_reference_table(n):
        t = rec["t"]
        ok = rec["pass"]
        all_ok &= ok
        print(f"{n:>2} {t.real:>10.4f}{t.imag:>+11.4f}i {rec['vol']:>12.6f} "
              f"{-rec['raw'].real:>12.6f} {rec['bw_vol']:>12.6f} {'yes' if ok else 'NO'}")

print("-" * 68)
print(f"all 20 rows match the embedded reference data: {all_ok}")

path = sys.argv[1] if len(sys.argv) > 1 else None
if path:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(twistknot.fixtures_json())
    print(f"fixtures written to {path}")

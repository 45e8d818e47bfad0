"""The numerical toolkit: dilogarithm, Bloch-Wigner function, octahedra.

Everything downstream rests on a principal-branch Li2 accurate to about
1e-15 relative.  This demo exercises the classical functional equations
and the two nine-shape octahedron identities.
"""

import cmath
import math

import numpy as np

from optlim import bloch_wigner, check_octahedron_identities, li2, plog
from optlim.numerics import PI2

print("special values")
print(f"  Li2(1)    = {li2(1.0).real:.15f}   (pi^2/6 = {PI2/6:.15f})")
print(f"  Li2(-1)   = {li2(-1.0).real:.15f}  (-pi^2/12 = {-PI2/12:.15f})")
print(f"  Li2(1/2)  = {li2(0.5).real:.15f}")
print(f"  Li2(2)    = {li2(2.0):.15f}   (on the cut: limit from below)")

z = cmath.exp(1j * math.pi / 3)
print(f"\n  D(e^(i pi/3)) = {bloch_wigner(z):.15f}  -> volume of the regular "
      f"ideal tetrahedron")
print(f"  2 D(e^(i pi/3)) = {2*bloch_wigner(z):.15f}  -> volume of the "
      f"figure-eight complement")

rng = np.random.default_rng(1)
worst_refl = worst_inv = worst_five = 0.0
n = 0
while n < 2000:
    r = np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2))
    th = rng.uniform(-np.pi, np.pi, 2)
    x, y = (complex(a * np.exp(1j * b)) for a, b in zip(r, th))
    if min(abs(x), abs(x - 1), abs(1 - x * y), abs(y), abs(y - 1)) < 1e-3:
        continue
    worst_refl = max(worst_refl,
                     abs(li2(x) + li2(1 - x) - (PI2 / 6 - plog(x) * plog(1 - x))))
    worst_inv = max(worst_inv,
                    abs(li2(x) + li2(1 / x) + PI2 / 6 + 0.5 * plog(-x) ** 2))
    args = (x, y, (1 - x) / (1 - x * y), 1 - x * y, (1 - y) / (1 - x * y))
    if all(min(abs(a), abs(a - 1)) > 1e-3 for a in args):
        worst_five = max(worst_five, abs(sum(bloch_wigner(a) for a in args)))
    n += 1

print(f"\nfunctional equations over {n} random points")
print(f"  reflection defect: {worst_refl:.2e}")
print(f"  inversion defect:  {worst_inv:.2e}")
print(f"  five-term D defect: {worst_five:.2e}")

print("\noctahedron shape identities (horizontal shapes t1..t4, t1 t2 t3 t4 = 1)")
done = 0
worst = [0.0, 0.0, 0.0]
while done < 200:
    r = np.exp(rng.uniform(np.log(0.3), np.log(3.0), 3))
    th = rng.uniform(-np.pi, np.pi, 3)
    t1, t2, t3 = (complex(a * np.exp(1j * b)) for a, b in zip(r, th))
    t4 = 1 / (t1 * t2 * t3)
    try:
        rep = check_octahedron_identities(t1, t2, t3, t4, tol_degenerate=1e-2)
    except Exception:
        continue
    worst[0] = max(worst[0], rep.identity1_defect)
    worst[1] = max(worst[1], rep.identity2_defect)
    worst[2] = max(worst[2], rep.volume_defect)
    done += 1
print(f"  identity 1 defect (mod 4 pi^2): {worst[0]:.2e}")
print(f"  identity 2 defect (mod 4 pi^2): {worst[1]:.2e}")
print(f"  volume additivity defect:       {worst[2]:.2e}")

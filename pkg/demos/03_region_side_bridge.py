"""The bridge between region solutions and side solutions.

Every crossing octahedron can be cut into five tetrahedra (seen by the
region potential) or four (seen by the side potential).  At a
nondegenerate region solution the side values are determined, solve their
own system, and carry the same corrected value modulo 4 pi^2.  The demo
also shows the failure mode: a diagram all of whose region solutions are
degenerate, with an empty side system.
"""

from optlim import (SolveConfig, assemble_V, assemble_W, build_diagram,
                    build_system, builtin, check_w_nondegenerate, parse_pd,
                    solve, verify_bridge, w_to_z, z_to_w)
from optlim import twistknot
from optlim.correspondence import CorrespondenceError

print("== twist knot index 2 (the 5_2 knot), closed-form solutions ==\n")
d = builtin("T2")
for t in twistknot.poly_roots(twistknot.defining_poly(2)):
    par = twistknot.parametrize(2, t)
    w = {r: par.assignment[r] for r in d.regions}
    report = verify_bridge(d, w)
    z = report.z
    back = z_to_w(d, z)
    drift = max(abs(back.assignment[r] / w[r] - back.assignment[d.regions[0]] / w[d.regions[0]])
                for r in d.regions)
    print(f"t = {t:.4f}")
    print(f"  W0 = {report.w0_region.raw:.6f}")
    print(f"  V0 = {report.v0_side.raw:.6f}")
    print(f"  congruent mod 4 pi^2: {report.congruent_mod_4pi2}; "
          f"round-trip drift {drift:.2e}\n")

print("== a diagram with solutions on the region side only ==\n")
FLIPPED = "X(1,7,2,6) X(5,3,6,2) X(4,8,5,7) X(3,8,4,1)"
print(f"PD: {FLIPPED}  (figure-eight with one clasp crossing switched)\n")
bad = build_diagram(parse_pd(FLIPPED))
sys_w = build_system(assemble_W(bad))
sols = solve(sys_w, SolveConfig(restarts=300, seed=4))
print(f"region system: {len(sols)} essential solutions")
degenerate = sum(1 for s in sols if not check_w_nondegenerate(bad, s.assignment))
print(f"degenerate at some crossing (wj + wl = wk + wm): {degenerate}/{len(sols)}")
try:
    w_to_z(bad, sols[0])
except CorrespondenceError as exc:
    print(f"w_to_z correctly refuses: {exc}")
sys_v = build_system(assemble_V(bad))
print(f"side system solutions found: {len(solve(sys_v, SolveConfig(restarts=800, seed=4)))}")

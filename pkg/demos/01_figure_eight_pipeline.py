"""End-to-end pipeline on the figure-eight knot.

Parse a planar-diagram code, inspect the combinatorics, assemble the
region potential, solve the induced equation system, and read off the
hyperbolic volume and the Chern-Simons invariant of each solution.
"""

from optlim import (SolveConfig, assemble_W, build_diagram, build_system,
                    parse_pd, solve, validate, w0)

PD = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"

print(f"input PD code: {PD}\n")
diagram = build_diagram(parse_pd(PD))
report = validate(diagram)
print(f"crossings={report.crossings}  regions={report.regions}  "
      f"sides={report.sides}  components={report.components}")
print(f"kinks={report.kinks}  euler_ok={report.euler_ok}\n")

for i, cr in enumerate(diagram.crossings, 1):
    print(f"crossing {i}: sign={cr.sign:+d}  regions(j,k,l,m)={cr.regions}  "
          f"sides(a,b,c,d)={cr.sides}")

potential = assemble_W(diagram)
print(f"\nregion potential: {len(potential.terms)} terms "
      f"in {len(potential.variables)} variables")

system = build_system(potential)
print(f"pinned variable: {system.pin}; {system.size} unknowns\n")

solutions = solve(system, SolveConfig(restarts=512, seed=0))
print(f"multistart Newton found {len(solutions)} essential solutions:\n")
seen = set()
for sol in solutions:
    res = w0(potential, sol, diagram=diagram)
    key = (round(res.vol, 6), round(res.cs_mod_pi2, 6))
    if key in seen:
        continue
    seen.add(key)
    print(f"  vol = {res.vol:+.9f}   cs mod pi^2 = {res.cs_mod_pi2:+.9f}   "
          f"(Bloch-Wigner cross-check {res.bw_vol:+.9f})")

print("\nThe geometric representation of the figure-eight knot has volume "
      "2.029883212819... = 2 vol(regular ideal tetrahedron); the solver finds "
      "it together with its complex conjugate.")

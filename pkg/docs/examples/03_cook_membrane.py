"""Cook's membrane: vertical tip displacement under mesh refinement.

Level r has 4**r quadrilaterals. Level 8 (65 536 cells) takes a few
seconds with the sparse direct solver; level 9 needs about 3 GB of memory.
"""

import sys

from fcfv import get_case, solve_problem

top = int(sys.argv[1]) if len(sys.argv) > 1 else 8
for which in ("compressible", "nearly_incompressible"):
    case = get_case("cook", which=which)
    print(f"\n{case.name}  (reference {case.reference['tip_displacement']})")
    for level in range(4, top + 1):
        res = solve_problem(case.problem(case.mesh(level)))
        name, value = case.scalar(res.mesh, res)
        print(f"  level {level}: {res.mesh.n_cells:7d} cells  {name} = {value:.4f}")

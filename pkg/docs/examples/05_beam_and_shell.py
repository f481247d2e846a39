"""Three-dimensional cases: the bent square beam and the pressurised
cylinder. Both use the hexahedral meshes; the beam also runs on tetrahedra.

The shell meshes are thin (two cells through the thickness) and strongly
graded towards the clamped ends, which is where the bending layer sits.
"""

from fcfv import SolverConfig, case_errors, get_case, solve_problem

beam = get_case("beam3d")
for kind in ("hex", "tet"):
    for level in (1, 2, 3):
        res = solve_problem(beam.problem(beam.mesh(level, kind)))
        e = case_errors(beam, res)
        print(f"beam {kind} L{level}: cells={res.mesh.n_cells:6d}  E_u={e['E_u']:.4f}  E_sigma={e['E_sigma']:.4f}")

shell = get_case("shell")
res = solve_problem(shell.problem(shell.mesh(1)), SolverConfig(preconditioner="amg"))
e = case_errors(shell, res)
print(f"shell mesh 1: E_u={e['E_u']:.4f}  E_sigma={e['E_sigma']:.4f}  E_r={e['E_r']:.4f}")

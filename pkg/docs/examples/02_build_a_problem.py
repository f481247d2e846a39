"""Set up a problem by hand instead of through the benchmark registry.

A plane-stress plate, clamped on the left, pulled on the right with a unit
traction. Shows mesh generation, boundary classification, the solve and the
VTK export.
"""

import numpy as np

from fcfv import (
    BoundaryRule,
    Loads,
    Material,
    Model,
    Problem,
    SolverConfig,
    Tag,
    classify_faces,
    export_vtk,
    generate_structured_2d,
    solve_problem,
)
from fcfv.mesh import everywhere

mesh = generate_structured_2d(5, "tri")  # 2 * 32 * 32 triangles on the unit square
rules = [
    BoundaryRule("clamp", Tag.DIRICHLET, lambda x, n: x[:, 0] < 1e-12),
    BoundaryRule("pull", Tag.NEUMANN, lambda x, n: x[:, 0] > 1 - 1e-12),
    BoundaryRule("free", Tag.NEUMANN, everywhere),  # first match wins, so this is the rest
]
faces = classify_faces(mesh, rules)
loads = Loads(
    dirichlet=lambda x: np.zeros_like(x),
    traction={"pull": lambda x, n: np.tile([1.0, 0.0], (len(x), 1))},
)
material = Material(200.0, 0.3, Model.PLANE_STRESS)
result = solve_problem(Problem(mesh, faces, material, loads), SolverConfig(method="direct"))

print("dofs:", result.system.K.shape[0])
print("solver:", result.report)
print("mean horizontal displacement on the loaded edge:", result.uhat[faces.groups == "pull", 0].mean())
export_vtk(mesh, result.solution, "plate.vtk")
print("wrote plate.vtk")

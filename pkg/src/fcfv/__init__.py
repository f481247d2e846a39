"""Face-centred finite volume solver for linear elasticity in 2D and 3D."""

__version__ = "0.1.0"

from .assembly import GlobalSystem, Loads, Problem, Stabilization, assemble, recover_local_solution
from .benchmarks import REGISTRY, BenchmarkCase, get_case
from .mesh import (
    BoundaryRule,
    FaceSets,
    Mesh,
    Tag,
    classify_faces,
    distort_mesh,
    generate_shell_mesh,
    generate_structured_2d,
    generate_structured_3d,
    read_mesh,
    write_mesh,
)
from .pipeline import Result, case_errors, solve_problem
from .postproc import ElementSolution, convergence_rate, export_vtk, l2_error, recover_all
from .solver import SolverConfig, solve
from .voigt import Material, Model, elasticity_matrix

__all__ = [
    "BenchmarkCase",
    "BoundaryRule",
    "ElementSolution",
    "FaceSets",
    "GlobalSystem",
    "Loads",
    "Material",
    "Mesh",
    "Model",
    "Problem",
    "REGISTRY",
    "Result",
    "SolverConfig",
    "Stabilization",
    "Tag",
    "assemble",
    "case_errors",
    "classify_faces",
    "convergence_rate",
    "distort_mesh",
    "elasticity_matrix",
    "export_vtk",
    "generate_shell_mesh",
    "generate_structured_2d",
    "generate_structured_3d",
    "get_case",
    "l2_error",
    "read_mesh",
    "recover_all",
    "recover_local_solution",
    "solve",
    "solve_problem",
    "write_mesh",
]

"""Assemble, solve and post-process in one call."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import GlobalSystem, Problem, assemble
from .benchmarks import BenchmarkCase
from .mesh import Mesh
from .postproc import ElementSolution, l2_error, radial_error, recover_all
from .solver import SolveReport, SolverConfig, solve


@dataclass(eq=False)
class Result:
    system: GlobalSystem
    uhat: np.ndarray  # (nf, nsd)
    solution: ElementSolution
    report: SolveReport

    @property
    def mesh(self) -> Mesh:
        return self.system.problem.mesh


def solve_problem(problem: Problem, config: SolverConfig = SolverConfig(), n_threads: int = 1) -> Result:
    system = assemble(problem, n_threads=n_threads)
    x, report = solve(system.K, system.f, config, nsd=system.nsd)
    uhat = system.face_field(x)
    return Result(system, uhat, recover_all(system, uhat), report)


def case_errors(case: BenchmarkCase, result: Result) -> dict:
    """Relative L2 errors of displacement and stress, plus the radial
    displacement error when the case provides it."""
    mesh = result.mesh
    out = {"h": mesh.h, "n_dof": result.system.n_dof}
    if case.exact_displacement is not None:
        out["E_u"] = l2_error(mesh, result.solution.u, case.exact_displacement).value
        out["E_sigma"] = l2_error(mesh, result.solution.stress, case.exact_stress).value
    if case.radial is not None:
        out["E_r"] = radial_error(mesh, result.solution.u, case.radial)
    return out

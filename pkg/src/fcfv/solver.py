"""Solvers for the global face system."""

from __future__ import annotations

import enum
import time
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

# AUTO switches from sparse LU to AMG-preconditioned CG above these sizes;
# LU fill in 3D grows much faster than in 2D.
DIRECT_LIMIT = {2: 1_100_000, 3: 200_000}


class Method(enum.Enum):
    AUTO = "auto"
    DIRECT = "direct"
    CG = "cg"


class Preconditioner(enum.Enum):
    NONE = "none"
    JACOBI = "jacobi"
    AMG = "amg"  # smoothed aggregation, needs pyamg


class SolverError(RuntimeError):
    pass


class ConvergenceError(SolverError):
    """CG stopped without reaching the tolerance; keeps the best iterate."""

    def __init__(self, message, x, residual, iterations):
        super().__init__(message)
        self.x = x
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class SolverConfig:
    method: Method = Method.AUTO
    cg_tolerance: float = 1e-9
    cg_max_iterations: int = 100_000
    preconditioner: Preconditioner = Preconditioner.NONE

    def __post_init__(self):
        for name, enum_type in (("method", Method), ("preconditioner", Preconditioner)):
            v = getattr(self, name)
            if isinstance(v, str):
                object.__setattr__(self, name, enum_type(v.lower()))
        if not 0 < self.cg_tolerance < 1:
            raise ValueError("cg_tolerance must lie in (0, 1)")
        if self.cg_max_iterations < 1:
            raise ValueError("cg_max_iterations must be >= 1")


@dataclass
class SolveReport:
    method: str
    n_dof: int
    iterations: int = 0
    residual: float = 0.0
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _backward_error(K, x, f) -> float:
    """Normwise backward error ``||K x - f|| / (||K||_inf ||x||_inf + ||f||_inf)``."""
    knorm = float(abs(K).sum(axis=1).max()) if K.shape[0] else 0.0
    den = knorm * np.abs(x).max(initial=0.0) + np.abs(f).max(initial=0.0)
    r = np.abs(K @ x - f).max(initial=0.0)
    return float(r / den) if den > 0 else 0.0


def _relative_residual(K, x, f) -> float:
    nf = np.linalg.norm(f)
    r = np.linalg.norm(K @ x - f)
    return float(r / nf) if nf > 0 else float(r)


def _factorize(K):
    # K is symmetric positive definite: diagonal pivots keep the fill-reducing
    # symmetric ordering intact; partial pivoting is only a fallback.
    try:
        return spla.splu(K, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0, options={"SymmetricMode": True})
    except RuntimeError:
        return spla.splu(K, permc_spec="COLAMD")


def solve_direct(K: sp.spmatrix, f: np.ndarray, refinement_steps: int = 3, target: float = 1e-13) -> np.ndarray:
    """Sparse LU solve followed by a few steps of iterative refinement."""
    K = sp.csc_matrix(K)
    try:
        lu = _factorize(K)
    except RuntimeError as exc:
        raise SolverError(f"sparse factorisation failed ({exc}); try method='cg'") from exc
    x = lu.solve(f)
    nf = np.linalg.norm(f) or 1.0
    r = f - K @ x
    rn = np.linalg.norm(r)
    for _ in range(refinement_steps):
        if rn <= target * nf:
            break
        x_new = x + lu.solve(r)
        r_new = f - K @ x_new
        rn_new = np.linalg.norm(r_new)
        if not rn_new < 0.5 * rn:  # stagnated at round-off level
            if rn_new < rn:
                x = x_new
            break
        x, r, rn = x_new, r_new, rn_new
    if not np.all(np.isfinite(x)):
        raise SolverError("sparse factorisation produced non-finite values; try method='cg'")
    return x


def jacobi_preconditioner(K):
    d = K.diagonal()
    if np.any(d <= 0):
        raise SolverError("Jacobi preconditioner needs a positive diagonal")
    dinv = 1.0 / d
    return lambda r: r * dinv


def amg_preconditioner(K, nsd: int | None = None):
    """One smoothed-aggregation V-cycle; rigid translations as near-null
    space when ``nsd`` is given (DOFs interleaved by component)."""
    try:
        import pyamg
    except ImportError as exc:  # pragma: no cover
        raise SolverError("the 'amg' preconditioner requires pyamg") from exc
    B = None
    if nsd:
        B = np.kron(np.ones((K.shape[0] // nsd, 1)), np.eye(nsd))
    ml = pyamg.smoothed_aggregation_solver(sp.csr_matrix(K), B=B)
    M = ml.aspreconditioner(cycle="V")
    return lambda r: M @ r


def conjugate_gradient(K, f, tol=1e-9, max_iterations=100_000, precondition=None):
    """Preconditioned CG on ``K x = f``.

    ``precondition`` maps a residual to ``M^-1 r`` (None for plain CG).
    Stops when ``||f - K x|| <= tol ||f||``. Returns ``(x, iterations, relres)``
    and raises :class:`ConvergenceError` carrying the best iterate on failure.
    """
    n = len(f)
    x = np.zeros(n)
    nf = np.linalg.norm(f)
    if nf == 0:
        return x, 0, 0.0
    M = precondition or (lambda r: r)
    r = f.copy()
    z = M(r)
    p = z.copy()
    rz = r @ z
    best, best_res = x.copy(), np.inf
    for it in range(1, max_iterations + 1):
        Kp = K @ p
        pKp = p @ Kp
        if pKp <= 0:
            raise ConvergenceError("matrix is not positive definite along a search direction", best, best_res, it)
        a = rz / pKp
        x += a * p
        r -= a * Kp
        res = np.linalg.norm(r) / nf
        if res < best_res:
            best, best_res = x.copy(), res
        if res <= tol:
            return x, it, res
        z = M(r)
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(
        f"CG did not converge in {max_iterations} iterations (residual {best_res:.3e})",
        best, best_res, max_iterations,
    )


def solve(K: sp.spmatrix, f: np.ndarray, config: SolverConfig = SolverConfig(), nsd: int | None = None) -> tuple[np.ndarray, SolveReport]:
    """Solve the symmetric system; returns the solution and a report.

    ``nsd`` (DOFs per face) selects the AUTO size limit and informs the AMG
    near-null space. When AUTO picks CG without an explicit preconditioner,
    AMG is used.
    """
    n = K.shape[0]
    method = config.method
    pc = config.preconditioner
    if method is Method.AUTO:
        method = Method.DIRECT if n <= DIRECT_LIMIT.get(nsd, DIRECT_LIMIT[3]) else Method.CG
        if method is Method.CG and pc is Preconditioner.NONE:
            pc = Preconditioner.AMG
    t0 = time.perf_counter()
    if n == 0:
        return np.zeros(0), SolveReport(method.value, 0)
    if method is Method.DIRECT:
        x = solve_direct(K, f)
        report = SolveReport("direct", n)
    else:
        M = None
        if pc is Preconditioner.JACOBI:
            M = jacobi_preconditioner(K)
        elif pc is Preconditioner.AMG:
            M = amg_preconditioner(K, nsd)
        x, its, _ = conjugate_gradient(K, f, config.cg_tolerance, config.cg_max_iterations, M)
        report = SolveReport("cg", n, iterations=its, extra={"preconditioner": pc.value})
    report.residual = _relative_residual(K, x, f)
    report.extra["backward_error"] = _backward_error(K, x, f)
    report.seconds = time.perf_counter() - t0
    return x, report

"""Local closed-form solves and the global face system.

Cell unknowns are one displacement ``u_e`` (nsd) and one mixed variable
``L_e = -D~ grad_S u`` (msd) per cell, the hybrid unknown ``uhat`` is one
displacement per non-Dirichlet face. With the stabilisation
``tau_j = t_j I`` the local problem decouples:

    L_e = -(z_e + sum_B |G_j| D~ N_j uhat_j) / |O_e|
    u_e = (beta_e + sum_B |G_j| t_j uhat_j) / a_e

with ``a_e = sum_A |G_j| t_j``, ``beta_e = |O_e| f_e + sum_D |G_j| t_j u_D``
and ``z_e = sum_D |G_j| D~ N_j u_D``.

Global rows are written as balances of the numerical traction
``-(N^T D~ L_e + tau (u_e - uhat))``, which makes interior, Neumann and
symmetry rows share one sign. On symmetry faces the normal component of
``uhat`` vanishes, so it is also projected out of the columns; the result
is a symmetric positive (semi)definite matrix with the same solution as the
row-by-row flux equations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
import scipy.sparse as sp

from .mesh import FaceSets, Mesh, Tag
from .voigt import Material, _normal_matrix, elasticity_matrix, sqrt_elasticity_matrix

FieldFn = Callable[..., np.ndarray]


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class Stabilization:
    """Isotropic face stabilisation ``tau * (E / length_scale) * I``."""

    tau: float = 3.0
    length_scale: float = 1.0

    def __post_init__(self):
        if not (self.tau > 0 and self.length_scale > 0):
            raise AssemblyError("stabilisation parameter and length scale must be positive")

    def scalar(self, material: Material) -> float:
        return self.tau * material.young_modulus / self.length_scale


def stabilization_tensor(material: Material, tau: float, length_scale: float) -> np.ndarray:
    """Face-independent stabilisation tensor ``tau (E / l) I``."""
    if not (tau > 0 and length_scale > 0 and material.young_modulus > 0):
        raise AssemblyError("stabilisation inputs must be positive")
    return Stabilization(tau, length_scale).scalar(material) * np.eye(material.nsd)


@dataclass
class Loads:
    """Body force and boundary data.

    ``dirichlet(x)`` and ``traction(x, n)`` return (m, nsd) arrays; either
    may be a mapping from face-group name to such a callable, missing groups
    receiving zero data.
    """

    body_force: FieldFn | None = None
    dirichlet: FieldFn | Mapping[str, FieldFn] | None = None
    traction: FieldFn | Mapping[str, FieldFn] | None = None


@dataclass(eq=False)
class Problem:
    mesh: Mesh
    face_sets: FaceSets
    material: Material
    loads: Loads = field(default_factory=Loads)
    stabilization: Stabilization = field(default_factory=Stabilization)

    def __post_init__(self):
        if self.material.nsd != self.mesh.nsd:
            raise AssemblyError(
                f"{self.material.model.value} material on a {self.mesh.nsd}D mesh"
            )


def _eval_grouped(fn, faces, groups, nsd, *args):
    out = np.zeros((len(faces), nsd))
    if fn is None or len(faces) == 0:
        return out
    if callable(fn):
        return np.asarray(fn(*args), dtype=float).reshape(len(faces), nsd)
    g = groups[faces]
    for name, sub in fn.items():
        sel = g == name
        if sel.any():
            out[sel] = np.asarray(sub(*(a[sel] for a in args)), dtype=float).reshape(-1, nsd)
    return out


def face_data(problem: Problem) -> tuple[np.ndarray, np.ndarray]:
    """Dirichlet displacement and Neumann traction at face barycentres.

    Both are (nf, nsd) arrays, zero away from their own face sets.
    """
    mesh, fs, loads = problem.mesh, problem.face_sets, problem.loads
    nsd = mesh.nsd
    uD = np.zeros((mesh.n_faces, nsd))
    g = np.zeros((mesh.n_faces, nsd))
    d = fs.faces_with(Tag.DIRICHLET)
    uD[d] = _eval_grouped(loads.dirichlet, d, fs.groups, nsd, mesh.face_centers[d])
    nf = fs.faces_with(Tag.NEUMANN)
    n_out = mesh.boundary_normals()[nf]
    g[nf] = _eval_grouped(loads.traction, nf, fs.groups, nsd, mesh.face_centers[nf], n_out)
    return uD, g


@dataclass(eq=False)
class LocalPrecomp:
    """Per-cell closed-form data.

    ``alpha`` is stored as the scalar ``a_e`` (``alpha_e = a_e I``).
    ``G[e, j] = D~ N_ej`` (msd x nsd), ``t[e, j]`` the face stabilisation.
    """

    alpha: np.ndarray
    beta: np.ndarray
    z: np.ndarray
    G: np.ndarray
    t: np.ndarray
    area: np.ndarray
    volume: np.ndarray
    D_tilde: np.ndarray

    def alpha_matrix(self, e: int) -> np.ndarray:
        return self.alpha[e] * np.eye(self.beta.shape[1])


def local_precompute(
    mesh: Mesh,
    face_sets: FaceSets,
    D_tilde: np.ndarray,
    tau_face: np.ndarray,
    uD_face: np.ndarray,
    body_force: np.ndarray | None = None,
    cells: np.ndarray | slice = slice(None),
) -> LocalPrecomp:
    """``alpha_e``, ``beta_e`` and ``z_e`` for the selected cells.

    ``body_force`` holds f at the cell centroids (ne, nsd); ``uD_face`` the
    Dirichlet data at face barycentres, only read on Dirichlet faces.
    """
    ef = mesh.elem_faces[cells]
    if ef.shape[1] == 0:
        raise AssemblyError("cells without faces")
    area = mesh.face_areas[ef]
    t = np.asarray(tau_face, dtype=float)[ef]
    vol = mesh.volumes[cells]
    G = np.einsum("mk,ejkl->ejml", D_tilde, _normal_matrix(mesh.normals[cells]))
    dmask = face_sets.tags[ef] == Tag.DIRICHLET
    uD = np.where(dmask[..., None], uD_face[ef], 0.0)
    a = np.sum(area * t, axis=1)
    beta = np.einsum("ej,ejk->ek", area * t, uD)
    if body_force is not None:
        beta = beta + vol[:, None] * np.asarray(body_force, dtype=float)[cells]
    z = np.einsum("ej,ejml,ejl->em", area, G, uD)
    return LocalPrecomp(a, beta, z, G, t, area, vol, D_tilde)


def recover_local_solution(
    pre: LocalPrecomp, uhat_cell: np.ndarray, free: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``(L_e, u_e)`` from the hybrid values on each cell's faces.

    ``uhat_cell`` has shape (ne, nfe, nsd); entries where ``free`` is False
    (Dirichlet faces) are ignored.
    """
    if np.any(~np.isfinite(uhat_cell[free])):
        raise AssemblyError("missing hybrid value on a non-Dirichlet face")
    uh = np.where(free[..., None], uhat_cell, 0.0)
    L = -(pre.z + np.einsum("ej,ejml,ejl->em", pre.area, pre.G, uh)) / pre.volume[:, None]
    u = (pre.beta + np.einsum("ej,ejk->ek", pre.area * pre.t, uh)) / pre.alpha[:, None]
    return L, u


def _row_projectors(mesh: Mesh, face_sets: FaceSets, cells) -> np.ndarray:
    """``S[e, j]``: identity, or the tangential projector on symmetry faces;
    zero on Dirichlet faces."""
    ef = mesh.elem_faces[cells]
    tags = face_sets.tags[ef]
    nsd = mesh.nsd
    n = mesh.normals[cells]
    S = np.broadcast_to(np.eye(nsd), tags.shape + (nsd, nsd)).copy()
    sym = tags == Tag.SYMMETRY
    S[sym] -= n[sym][:, :, None] * n[sym][:, None, :]
    S[tags == Tag.DIRICHLET] = 0.0
    return S


def element_matrices(
    mesh: Mesh,
    face_sets: FaceSets,
    pre: LocalPrecomp,
    g_face: np.ndarray,
    cells: np.ndarray | slice = slice(None),
) -> tuple[np.ndarray, np.ndarray]:
    """Elemental contributions to the global system.

    Returns ``K`` of shape (ne, nfe, nfe, nsd, nsd) and ``f`` of shape
    (ne, nfe, nsd). Rows and columns of Dirichlet faces are zero.
    """
    ef = mesh.elem_faces[cells]
    nsd = mesh.nsd
    S = _row_projectors(mesh, face_sets, cells)
    tags = face_sets.tags[ef]
    w = pre.area * pre.t
    SG = np.einsum("ejkl,ejml->ejkm", S, pre.G)  # S_j G_j^T, (ne,nfe,nsd,msd)
    K = np.einsum("ei,eikm,ejml,ej->eijkl", pre.area, SG, pre.G, pre.area) / pre.volume[:, None, None, None, None]
    K = np.einsum("eijkl,ejlp->eijkp", K, S)
    K -= np.einsum("ei,ej,eikl,ejlp->eijkp", w, w / pre.alpha[:, None], S, S)
    eye = np.eye(nsd)
    diag = w[..., None, None] * S + pre.area[..., None, None] * np.where(
        (tags == Tag.SYMMETRY)[..., None, None], eye - S, 0.0
    )
    idx = np.arange(ef.shape[1])
    K[:, idx, idx] += diag
    K = 0.5 * (K + K.transpose(0, 2, 1, 4, 3))

    f = np.einsum("eikl,ei,el->eik", S, w / pre.alpha[:, None], pre.beta)
    f -= np.einsum("ei,eikm,em->eik", pre.area, SG, pre.z) / pre.volume[:, None, None]
    xi = face_sets.xi[ef]
    f += (pre.area * xi)[..., None] * g_face[ef]
    return K, f


@dataclass(eq=False)
class GlobalSystem:
    """``K uhat = f`` over the non-Dirichlet faces, plus what recovery needs.

    Face ``k`` owns DOFs ``nsd*dof_face[k] ... nsd*dof_face[k] + nsd - 1``.
    """

    K: sp.csr_matrix
    f: np.ndarray
    dof_face: np.ndarray
    nsd: int
    problem: Problem
    pre: LocalPrecomp
    uD_face: np.ndarray
    g_face: np.ndarray
    tau_face: np.ndarray

    @property
    def n_dof(self) -> int:
        return self.K.shape[0]

    def face_field(self, x: np.ndarray) -> np.ndarray:
        """Per-face displacement (nf, nsd): solved values, Dirichlet data elsewhere."""
        uhat = self.uD_face.copy()
        free = self.dof_face >= 0
        uhat[free] = np.asarray(x).reshape(-1, self.nsd)[self.dof_face[free]]
        return uhat


def _chunks(n: int, size: int):
    return [slice(s, min(s + size, n)) for s in range(0, n, size)]


def assemble(problem: Problem, n_threads: int = 1, chunk: int = 20000) -> GlobalSystem:
    """Build the global symmetric face system.

    Cells are processed in fixed-size chunks, optionally on a thread pool;
    chunk results are merged in chunk order so the output does not depend
    on ``n_threads``.
    """
    mesh, fs, mat = problem.mesh, problem.face_sets, problem.material
    nsd = mesh.nsd
    D_tilde = sqrt_elasticity_matrix(elasticity_matrix(mat, nsd))
    tau_face = np.full(mesh.n_faces, problem.stabilization.scalar(mat))
    uD, g = face_data(problem)
    fb = problem.loads.body_force
    body = None if fb is None else np.asarray(fb(mesh.centroids), dtype=float).reshape(-1, nsd)
    pre = local_precompute(mesh, fs, D_tilde, tau_face, uD, body)
    if np.any(pre.alpha <= 0):
        raise AssemblyError("singular local stabilisation sum")

    dof = fs.dof_face
    n = fs.n_dof(nsd)

    def work(sl):
        sub = LocalPrecomp(
            pre.alpha[sl], pre.beta[sl], pre.z[sl], pre.G[sl], pre.t[sl], pre.area[sl], pre.volume[sl], D_tilde
        )
        K, f = element_matrices(mesh, fs, sub, g, sl)
        d = dof[mesh.elem_faces[sl]]  # (ne, nfe)
        rows = (d[:, :, None] * nsd + np.arange(nsd)).reshape(len(d), -1)
        ne, nfe = d.shape
        Kf = K.transpose(0, 1, 3, 2, 4).reshape(ne, nfe * nsd, nfe * nsd)
        ff = f.reshape(ne, -1)
        ok = rows >= 0
        ri = np.broadcast_to(rows[:, :, None], Kf.shape)
        ci = np.broadcast_to(rows[:, None, :], Kf.shape)
        keep = ok[:, :, None] & ok[:, None, :]
        return ri[keep], ci[keep], Kf[keep], rows[ok], ff[ok]

    slices = _chunks(mesh.n_cells, chunk)
    if n_threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(n_threads) as ex:
            parts = list(ex.map(work, slices))
    else:
        parts = [work(s) for s in slices]
    ri = np.concatenate([p[0] for p in parts])
    ci = np.concatenate([p[1] for p in parts])
    vals = np.concatenate([p[2] for p in parts])
    K = sp.coo_matrix((vals, (ri, ci)), shape=(n, n)).tocsr()
    K.sum_duplicates()
    f = np.bincount(np.concatenate([p[3] for p in parts]), weights=np.concatenate([p[4] for p in parts]), minlength=n)
    return GlobalSystem(K, f, dof, nsd, problem, pre, uD, g, tau_face)

"""Independent reference implementations used by the tests.

Nothing here reuses the closed-form kernels of the package: the Voigt
normal matrix and the square root of the elasticity matrix are rebuilt by
hand, and the discrete equations are assembled unknown by unknown into
dense matrices.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from fcfv.mesh import Tag


def voigt_normal(n):
    """Voigt normal matrix written out entry by entry."""
    if len(n) == 2:
        n1, n2 = n
        return np.array([[n1, 0.0], [0.0, n2], [n2, n1]])
    n1, n2, n3 = n
    return np.array(
        [
            [n1, 0, 0],
            [0, n2, 0],
            [0, 0, n3],
            [n2, n1, 0],
            [n3, 0, n1],
            [0, n3, n2],
        ],
        dtype=float,
    )


def hooke(E, nu, model):
    """Voigt elasticity matrix from Lamé constants."""
    mu = E / (2 * (1 + nu))
    lam = E * nu / ((1 + nu) * (1 - 2 * nu))
    if model == "3d":
        D = np.zeros((6, 6))
        D[:3, :3] = lam
        D[:3, :3] += 2 * mu * np.eye(3)
        D[3:, 3:] = mu * np.eye(3)
        return D
    if model == "plane_stress":
        lam = 2 * lam * mu / (lam + 2 * mu)
    return np.array([[lam + 2 * mu, lam, 0], [lam, lam + 2 * mu, 0], [0, 0, mu]])


def sqrt_spd(D):
    return np.real(sla.sqrtm(D))


def dense_local_solve(volume, areas, normals, taus, dirichlet, uD, uhat, f, Dt):
    """Solve the one-point-quadrature local equations of one cell as a dense
    (msd + nsd) system.

    ``taus`` is a list of (nsd, nsd) stabilisation tensors; ``dirichlet`` a
    boolean list; ``uD``/``uhat`` per-face vectors (only the relevant one is
    read on each face). Constant test functions make the volume terms with
    derivatives vanish, which leaves the mass and face terms below.
    """
    nsd = len(f)
    msd = Dt.shape[0]
    A = np.zeros((msd + nsd, msd + nsd))
    b = np.zeros(msd + nsd)
    # test with each constant v = e_i in the L equation
    A[:msd, :msd] = -volume * np.eye(msd)
    # test with each constant w = e_i in the u equation
    for area, n, tau, isD, ud, uh in zip(areas, normals, taus, dirichlet, uD, uhat):
        DN = Dt.T @ voigt_normal(n)
        A[msd:, msd:] += area * tau
        data = ud if isD else uh
        b[:msd] += area * DN @ data
        b[msd:] += area * tau @ data
    b[msd:] += volume * f
    x = np.linalg.solve(A, b)
    return x[:msd], x[msd:]


class FullSystem:
    """Every cell's (L_e, u_e) and every free face's uhat in one dense system.

    Local rows follow the one-point-quadrature cell equations. Face rows are
    the literal flux equations, one row block per face:

    * interior: ``sum_e |G| (N^T D~ L_e + tau (u_e - uhat)) = 0``
    * Neumann: ``-|G| (N^T D~ L_e + tau (u_e - uhat)) = |G| g``
    * symmetry: ``|G| P_n uhat - P_t |G| (N^T D~ L_e + tau (u_e - uhat)) = 0``
    """

    def __init__(self, problem):
        mesh, fs, mat = problem.mesh, problem.face_sets, problem.material
        self.mesh, self.fs = mesh, fs
        nsd = mesh.nsd
        msd = 3 if nsd == 2 else 6
        Dt = sqrt_spd(hooke(mat.young_modulus, mat.poisson_ratio, mat.model.value))
        t = problem.stabilization.tau * mat.young_modulus / problem.stabilization.length_scale
        tau = t * np.eye(nsd)
        loads = problem.loads
        ne = mesh.n_cells
        nloc = ne * (msd + nsd)
        free = np.flatnonzero(fs.tags != Tag.DIRICHLET)
        fidx = {f: k for k, f in enumerate(free)}
        n = nloc + nsd * len(free)
        A = np.zeros((n, n))
        b = np.zeros(n)

        def Lrow(e):
            return slice(e * (msd + nsd), e * (msd + nsd) + msd)

        def urow(e):
            return slice(e * (msd + nsd) + msd, (e + 1) * (msd + nsd))

        def hrow(f):
            k = nloc + nsd * fidx[f]
            return slice(k, k + nsd)

        def eval_grouped(fn, f, *args):
            if fn is None:
                return np.zeros(nsd)
            if not callable(fn):
                fn = fn.get(fs.groups[f])
                if fn is None:
                    return np.zeros(nsd)
            return np.asarray(fn(*(a[None] for a in args)), dtype=float).reshape(nsd)

        for e in range(ne):
            vol = mesh.volumes[e]
            fe = np.zeros(nsd) if loads.body_force is None else np.asarray(
                loads.body_force(mesh.centroids[[e]]), dtype=float
            ).reshape(nsd)
            A[Lrow(e), Lrow(e)] = -vol * np.eye(msd)
            b[urow(e)] += vol * fe
            for j, f in enumerate(mesh.elem_faces[e]):
                area, nrm = mesh.face_areas[f], mesh.normals[e, j]
                DN = Dt @ voigt_normal(nrm)  # D~ symmetric
                A[urow(e), urow(e)] += area * tau
                if fs.tags[f] == Tag.DIRICHLET:
                    ud = eval_grouped(loads.dirichlet, f, mesh.face_centers[f])
                    b[Lrow(e)] += area * DN @ ud
                    b[urow(e)] += area * tau @ ud
                    continue
                A[Lrow(e), hrow(f)] -= area * DN
                A[urow(e), hrow(f)] -= area * tau
                # face row: flux of this cell through f
                tag = fs.tags[f]
                if tag == Tag.INTERIOR:
                    R = np.eye(nsd)
                elif tag == Tag.NEUMANN:
                    R = -np.eye(nsd)
                else:  # symmetry
                    R = -(np.eye(nsd) - np.outer(nrm, nrm))
                A[hrow(f), Lrow(e)] += area * R @ DN.T
                A[hrow(f), urow(e)] += area * R @ tau
                A[hrow(f), hrow(f)] -= area * R @ tau
        for f in free:
            if fs.tags[f] == Tag.NEUMANN:
                e = mesh.face_elems[f, 0]
                j = int(np.flatnonzero(mesh.elem_faces[e] == f)[0])
                g = eval_grouped(loads.traction, f, mesh.face_centers[f], mesh.normals[e, j])
                b[hrow(f)] += mesh.face_areas[f] * g
            elif fs.tags[f] == Tag.SYMMETRY:
                e = mesh.face_elems[f, 0]
                j = int(np.flatnonzero(mesh.elem_faces[e] == f)[0])
                nrm = mesh.normals[e, j]
                A[hrow(f), hrow(f)] += mesh.face_areas[f] * np.outer(nrm, nrm)
        self.A, self.b, self.nloc, self.free, self.nsd, self.msd = A, b, nloc, free, nsd, msd

    def schur(self):
        """Condense the cell unknowns: returns (K, f) on the face unknowns."""
        k = self.nloc
        A11, A12 = self.A[:k, :k], self.A[:k, k:]
        A21, A22 = self.A[k:, :k], self.A[k:, k:]
        X = np.linalg.solve(A11, np.column_stack([A12, self.b[:k]]))
        K = A22 - A21 @ X[:, :-1]
        f = self.b[k:] - A21 @ X[:, -1]
        return K, f

    def solve(self):
        """Solve the whole block system; returns (L, u, uhat_free)."""
        x = np.linalg.solve(self.A, self.b)
        loc = x[: self.nloc].reshape(self.mesh.n_cells, self.msd + self.nsd)
        return loc[:, : self.msd], loc[:, self.msd :], x[self.nloc :].reshape(-1, self.nsd)

    def to_symmetric_form(self, K_lit):
        """Map the literal condensed matrix onto the symmetric form used by
        the package: interior rows change sign, symmetry columns are
        projected tangentially and ``|G| P_n`` pins the normal component."""
        nsd = self.nsd
        mesh, fs = self.mesh, self.fs
        n = len(self.free)
        sign = np.ones(n * nsd)
        C = np.eye(n * nsd)
        P = np.zeros((n * nsd, n * nsd))
        for k, f in enumerate(self.free):
            s = slice(nsd * k, nsd * k + nsd)
            if fs.tags[f] == Tag.INTERIOR:
                sign[s] = -1.0
            elif fs.tags[f] == Tag.SYMMETRY:
                e = mesh.face_elems[f, 0]
                j = int(np.flatnonzero(mesh.elem_faces[e] == f)[0])
                nrm = mesh.normals[e, j]
                Pn = np.outer(nrm, nrm)
                C[s, s] = np.eye(nsd) - Pn
                P[s, s] = mesh.face_areas[f] * Pn
        return sign[:, None] * (K_lit @ C) + P, sign

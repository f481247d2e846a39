"""Cell-wise recovery, error norms and field export."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .assembly import GlobalSystem, recover_local_solution
from .mesh import Mesh
from .voigt import Material, elasticity_matrix, stress_from_mixed, von_mises


@dataclass(eq=False)
class ElementSolution:
    """Constant per-cell fields: displacement, mixed variable, stress."""

    u: np.ndarray
    L: np.ndarray
    stress: np.ndarray
    von_mises: np.ndarray


def recover_all(system: GlobalSystem, uhat_face: np.ndarray) -> ElementSolution:
    """Apply the closed-form local solve on every cell.

    ``uhat_face`` is the (nf, nsd) face field from
    :meth:`GlobalSystem.face_field`.
    """
    mesh = system.problem.mesh
    free = system.dof_face[mesh.elem_faces] >= 0
    L, u = recover_local_solution(system.pre, uhat_face[mesh.elem_faces], free)
    s = stress_from_mixed(L, system.pre.D_tilde)
    return ElementSolution(u, L, s, von_mises(s, system.problem.material))


@dataclass
class L2Error:
    value: float
    absolute: bool = False


def l2_error(mesh: Mesh, numerical: np.ndarray, exact) -> L2Error:
    """Relative L2 error of a piecewise-constant field (midpoint rule).

    ``exact`` is a callable evaluated at the centroids or an array of
    centroid values. Falls back to the absolute norm (flagged) when the
    exact field vanishes.
    """
    ref = exact(mesh.centroids) if callable(exact) else exact
    ref = np.asarray(ref, dtype=float).reshape(numerical.shape)
    w = mesh.volumes.reshape((-1,) + (1,) * (numerical.ndim - 1))
    num = float(np.sum(w * (numerical - ref) ** 2))
    den = float(np.sum(w * ref**2))
    if den == 0.0:
        return L2Error(np.sqrt(num), absolute=True)
    return L2Error(np.sqrt(num / den))


def radial_error(mesh: Mesh, u: np.ndarray, exact_ur, x_section=None) -> float:
    """Relative L2 error of the radial displacement along one axial column.

    The column is the set of cells whose centroid lies closest to the
    section line ``(x1*, x2*)`` in each axial layer; by default the line
    through the outermost column next to ``theta = 0``. The integrals in x3
    use the midpoint rule over the column cells.
    """
    c = mesh.centroids
    r = np.hypot(c[:, 0], c[:, 1])
    theta = np.arctan2(c[:, 1], c[:, 0])
    if x_section is None:
        outer = np.isclose(r, r.max(), rtol=1e-6, atol=0.0)
        tmin = np.abs(theta[outer]).min()
        pick = outer & np.isclose(theta, tmin, atol=1e-9)
    else:
        xs = np.asarray(x_section, dtype=float)
        d = np.hypot(c[:, 0] - xs[0], c[:, 1] - xs[1])
        zkey = np.round(c[:, 2], 12)
        pick = np.zeros(len(c), dtype=bool)
        for zk in np.unique(zkey):
            layer = np.flatnonzero(zkey == zk)
            pick[layer[np.argmin(d[layer])]] = True
        if d[pick].max() > mesh.diameters[pick].max():
            raise ValueError("section line misses the mesh")
    col = np.flatnonzero(pick)
    if col.size == 0:
        raise ValueError("section line misses the mesh")
    col = col[np.argsort(c[col, 2])]
    th = theta[col]
    ur_h = u[col, 0] * np.cos(th) + u[col, 1] * np.sin(th)
    ur = exact_ur(c[col, 2])
    x = mesh.nodes[mesh.cells[col]][..., 2]
    dz = x.max(axis=1) - x.min(axis=1)
    return float(np.sqrt(np.sum(dz * (ur_h - ur) ** 2) / np.sum(dz * ur**2)))


def convergence_rate(h, err) -> float:
    """Least-squares slope of log(err) against log(h)."""
    h, err = np.log(np.asarray(h, dtype=float)), np.log(np.asarray(err, dtype=float))
    return float(np.polyfit(h, err, 1)[0])


def hooke_stress(material: Material, strain_voigt: np.ndarray) -> np.ndarray:
    return strain_voigt @ elasticity_matrix(material).T


VTK_TYPES = {"tri": 5, "quad": 9, "tet": 10, "hex": 12}


def vtk_string(mesh: Mesh, sol: ElementSolution | None = None, title: str = "fcfv") -> str:
    """Legacy ASCII VTK unstructured grid with cell data."""
    out = io.StringIO()
    out.write("# vtk DataFile Version 3.0\n")
    out.write(title.replace("\n", " ")[:255] + "\n")
    out.write("ASCII\nDATASET UNSTRUCTURED_GRID\n")
    out.write(f"POINTS {len(mesh.nodes)} double\n")
    pts = mesh.nodes if mesh.nsd == 3 else np.column_stack([mesh.nodes, np.zeros(len(mesh.nodes))])
    for p in pts:
        out.write(" ".join(repr(float(v)) for v in p) + "\n")
    nv = mesh.cells.shape[1]
    out.write(f"CELLS {mesh.n_cells} {mesh.n_cells * (nv + 1)}\n")
    for c in mesh.cells:
        out.write(f"{nv} " + " ".join(str(int(v)) for v in c) + "\n")
    out.write(f"CELL_TYPES {mesh.n_cells}\n")
    out.write("\n".join([str(VTK_TYPES[mesh.kind])] * mesh.n_cells) + "\n")
    if sol is not None:
        out.write(f"CELL_DATA {mesh.n_cells}\n")
        u = sol.u if mesh.nsd == 3 else np.column_stack([sol.u, np.zeros(mesh.n_cells)])
        out.write("VECTORS displacement double\n")
        for row in u:
            out.write(" ".join(repr(float(v)) for v in row) + "\n")
        ncomp = sol.stress.shape[1]
        out.write(f"SCALARS stress_voigt double {ncomp}\nLOOKUP_TABLE default\n")
        for row in sol.stress:
            out.write(" ".join(repr(float(v)) for v in row) + "\n")
        out.write("SCALARS von_mises double 1\nLOOKUP_TABLE default\n")
        out.write("\n".join(repr(float(v)) for v in sol.von_mises) + "\n")
    return out.getvalue()


def export_vtk(mesh: Mesh, sol: ElementSolution | None, path, title: str = "fcfv") -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(vtk_string(mesh, sol, title))


ERROR_COLUMNS = ["mesh_id", "h", "n_dof", "E_u", "E_sigma", "E_r"]


def write_error_table(rows: list[dict], path_or_buffer, columns=ERROR_COLUMNS) -> None:
    """CSV table of per-mesh errors; missing values are left blank."""
    own = isinstance(path_or_buffer, (str, bytes)) or hasattr(path_or_buffer, "__fspath__")
    fh = open(path_or_buffer, "w", newline="") if own else path_or_buffer
    try:
        w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if row.get(k) is None else row[k]) for k in columns})
    finally:
        if own:
            fh.close()

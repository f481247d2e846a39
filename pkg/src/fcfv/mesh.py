"""Meshes of the broken computational domain.

A :class:`Mesh` holds a single-kind cell list (triangles, quadrilaterals,
tetrahedra or hexahedra), the unique faces of the partition with their
element connectivity, and the one-point-quadrature geometry the scheme
needs: cell measures and centroids, face measures, barycentres and outward
normals per element face.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

# local faces listed so that the right-hand normal points outward on a
# positively oriented cell
LOCAL_FACES = {
    "tri": np.array([[0, 1], [1, 2], [2, 0]]),
    "quad": np.array([[0, 1], [1, 2], [2, 3], [3, 0]]),
    "tet": np.array([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]]),
    "hex": np.array(
        [
            [0, 3, 2, 1],
            [4, 5, 6, 7],
            [0, 1, 5, 4],
            [2, 3, 7, 6],
            [0, 4, 7, 3],
            [1, 2, 6, 5],
        ]
    ),
}
CELL_DIM = {"tri": 2, "quad": 2, "tet": 3, "hex": 3}
CELL_NODES = {"tri": 3, "quad": 4, "tet": 4, "hex": 8}


class MeshError(ValueError):
    pass


class ClassificationError(MeshError):
    pass


class Tag(enum.IntEnum):
    INTERIOR = 0
    DIRICHLET = 1
    NEUMANN = 2
    SYMMETRY = 3


def _freeze(*arrays):
    for a in arrays:
        a.flags.writeable = False


@dataclass(eq=False)
class Mesh:
    """Cells, unique faces and geometric measures.

    ``normals[e, j]`` is the outward unit normal of local face ``j`` of cell
    ``e``; ``elem_faces[e, j]`` is its global face index and
    ``face_sign[e, j]`` is ``+1`` when the outward normal agrees with the
    stored global face normal. ``face_elems[f]`` lists the one or two cells
    sharing face ``f`` (``-1`` pads boundary faces).

    ``face_tags``/``face_groups`` are optional per-face boundary labels
    carried over from an imported mesh file.
    """

    nodes: np.ndarray
    cells: np.ndarray
    kind: str
    face_tags: np.ndarray | None = None
    face_groups: np.ndarray | None = None

    faces: np.ndarray = field(init=False)
    elem_faces: np.ndarray = field(init=False)
    face_elems: np.ndarray = field(init=False)
    face_sign: np.ndarray = field(init=False)
    volumes: np.ndarray = field(init=False)
    centroids: np.ndarray = field(init=False)
    diameters: np.ndarray = field(init=False)
    face_areas: np.ndarray = field(init=False)
    face_centers: np.ndarray = field(init=False)
    face_normals: np.ndarray = field(init=False)
    normals: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.kind not in LOCAL_FACES:
            raise MeshError(f"unsupported element kind {self.kind!r}")
        self.nodes = np.ascontiguousarray(self.nodes, dtype=float)
        self.cells = np.ascontiguousarray(self.cells, dtype=np.int64)
        if self.nodes.ndim != 2 or self.nodes.shape[1] != CELL_DIM[self.kind]:
            raise MeshError(f"{self.kind} mesh needs {CELL_DIM[self.kind]}D nodes, got {self.nodes.shape}")
        if self.cells.ndim != 2 or self.cells.shape[1] != CELL_NODES[self.kind]:
            raise MeshError(f"{self.kind} cells need {CELL_NODES[self.kind]} nodes, got {self.cells.shape}")
        if self.cells.size and (self.cells.min() < 0 or self.cells.max() >= len(self.nodes)):
            raise MeshError("cell connectivity references a missing node")
        _build_topology(self)
        compute_geometry(self)
        _freeze(self.nodes, self.cells)

    @property
    def nsd(self) -> int:
        return self.nodes.shape[1]

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def faces_per_cell(self) -> int:
        return self.elem_faces.shape[1]

    @property
    def boundary_faces(self) -> np.ndarray:
        return np.flatnonzero(self.face_elems[:, 1] < 0)

    @property
    def interior_faces(self) -> np.ndarray:
        return np.flatnonzero(self.face_elems[:, 1] >= 0)

    @property
    def h(self) -> float:
        """Characteristic size: the largest cell diameter."""
        return float(self.diameters.max())

    def boundary_normals(self) -> np.ndarray:
        """Outward normal of every face seen from its first cell, shape (nf, nsd)."""
        return self.face_normals * self._owner_sign()[:, None]

    def _owner_sign(self) -> np.ndarray:
        e = self.face_elems[:, 0]
        j = np.argmax(self.elem_faces[e] == np.arange(self.n_faces)[:, None], axis=1)
        return self.face_sign[e, j]

    def boundary_nodes(self) -> np.ndarray:
        return np.unique(self.faces[self.boundary_faces])

    def min_edge_length(self) -> float:
        edges = _cell_edges(self)
        return float(np.linalg.norm(self.nodes[edges[:, 0]] - self.nodes[edges[:, 1]], axis=1).min())

    def digest(self) -> str:
        """Content hash of nodes and connectivity."""
        h = hashlib.sha256()
        h.update(self.kind.encode())
        h.update(self.nodes.tobytes())
        h.update(self.cells.tobytes())
        return h.hexdigest()[:16]

    def with_nodes(self, nodes: np.ndarray) -> "Mesh":
        return Mesh(nodes, self.cells, self.kind, self.face_tags, self.face_groups)


def _cell_edges(mesh: Mesh) -> np.ndarray:
    if mesh.nsd == 2:
        return mesh.faces
    if mesh.kind == "tet":
        loc = np.array([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])
    else:
        loc = np.array(
            [[0, 1], [1, 2], [2, 3], [3, 0], [4, 5], [5, 6], [6, 7], [7, 4], [0, 4], [1, 5], [2, 6], [3, 7]]
        )
    e = np.sort(mesh.cells[:, loc].reshape(-1, 2), axis=1)
    return np.unique(e, axis=0)


def _build_topology(mesh: Mesh) -> None:
    loc = LOCAL_FACES[mesh.kind]
    ne, nfe = len(mesh.cells), len(loc)
    local = mesh.cells[:, loc]  # (ne, nfe, nvf)
    keys = np.sort(local.reshape(ne * nfe, -1), axis=1)
    _, first, inverse, counts = np.unique(keys, axis=0, return_index=True, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    if counts.size and counts.max() > 2:
        bad = np.flatnonzero(counts > 2)
        raise MeshError(f"non-manifold faces shared by more than two cells: {bad[:10].tolist()}")
    mesh.faces = local.reshape(ne * nfe, -1)[first]
    mesh.elem_faces = inverse.reshape(ne, nfe)
    nf = len(first)
    order = np.argsort(inverse, kind="stable")
    owners = order // nfe
    face_elems = -np.ones((nf, 2), dtype=np.int64)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    face_elems[:, 0] = owners[starts]
    two = counts == 2
    face_elems[two, 1] = owners[starts[two] + 1]
    mesh.face_elems = face_elems
    _freeze(mesh.faces, mesh.elem_faces, mesh.face_elems)


def _face_vector_geometry(x: np.ndarray):
    """Vector area and barycentre of faces given their node coordinates.

    ``x`` has shape (m, nvf, nsd). Quadrilateral faces are split along the
    0-2 diagonal; the vector area does not depend on the diagonal.
    """
    m, nvf, nsd = x.shape
    if nsd == 2:
        t = x[:, 1] - x[:, 0]
        return np.stack([t[:, 1], -t[:, 0]], axis=1), 0.5 * (x[:, 0] + x[:, 1])
    if nvf == 3:
        a = 0.5 * np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0])
        return a, x.mean(axis=1)
    a1 = 0.5 * np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0])
    a2 = 0.5 * np.cross(x[:, 2] - x[:, 0], x[:, 3] - x[:, 0])
    c1 = (x[:, 0] + x[:, 1] + x[:, 2]) / 3.0
    c2 = (x[:, 0] + x[:, 2] + x[:, 3]) / 3.0
    w1 = np.linalg.norm(a1, axis=1)[:, None]
    w2 = np.linalg.norm(a2, axis=1)[:, None]
    wsum = np.where(w1 + w2 > 0, w1 + w2, 1.0)
    return a1 + a2, (w1 * c1 + w2 * c2) / wsum


def compute_geometry(mesh: Mesh) -> Mesh:
    """Fill cell measures, centroids, diameters and face quantities.

    Cell measures come from the divergence theorem over the face
    triangulation, so they are exact for simplices and planar-faced cells
    and consistent with the face vectors for warped hexahedra. Raises
    :class:`MeshError` on inverted or degenerate cells.
    """
    X = mesh.nodes
    nsd = mesh.nsd
    loc = LOCAL_FACES[mesh.kind]
    fx = X[mesh.faces]
    area_vec, fc = _face_vector_geometry(fx)
    area = np.linalg.norm(area_vec, axis=1)
    if np.any(area <= 0):
        raise MeshError(f"degenerate faces: {np.flatnonzero(area <= 0)[:10].tolist()}")
    mesh.face_areas = area
    mesh.face_centers = fc
    mesh.face_normals = area_vec / area[:, None]

    local_vec, _ = _face_vector_geometry(X[mesh.cells[:, loc]].reshape(-1, loc.shape[1], nsd))
    local_vec = local_vec.reshape(mesh.n_cells, len(loc), nsd)
    sign = np.where(np.einsum("ejk,ejk->ej", local_vec, mesh.face_normals[mesh.elem_faces]) >= 0, 1, -1)
    mesh.face_sign = sign.astype(np.int8)
    mesh.normals = mesh.face_normals[mesh.elem_faces] * sign[..., None]

    cx = X[mesh.cells]
    p0 = cx.mean(axis=1)
    if nsd == 2:
        # fan from the vertex average over the oriented edges
        a = cx[:, loc[:, 0]] - p0[:, None]
        b = cx[:, loc[:, 1]] - p0[:, None]
        sub = 0.5 * (a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])
        subc = (cx[:, loc[:, 0]] + cx[:, loc[:, 1]] + p0[:, None]) / 3.0
    else:
        if mesh.kind == "tet":
            tris = loc[:, None, :]
        else:
            tris = np.stack([loc[:, [0, 1, 2]], loc[:, [0, 2, 3]]], axis=1)
        t = cx[:, tris]  # (ne, nfe, ntri, 3, 3)
        q = p0[:, None, None, :]
        sub = np.einsum("...i,...i->...", np.cross(t[..., 1, :] - t[..., 0, :], t[..., 2, :] - t[..., 0, :]), t[..., 0, :] - q) / 6.0
        subc = (t.sum(axis=-2) + q) / 4.0
        sub = sub.reshape(mesh.n_cells, -1)
        subc = subc.reshape(mesh.n_cells, -1, 3)
    vol = sub.sum(axis=1)
    if np.any(vol <= 0):
        bad = np.flatnonzero(vol <= 0)
        raise MeshError(f"inverted or degenerate cells: {bad[:10].tolist()}")
    mesh.volumes = vol
    mesh.centroids = np.einsum("es,esk->ek", sub, subc) / vol[:, None]
    nv = cx.shape[1]
    iu, ju = np.triu_indices(nv, 1)
    mesh.diameters = np.linalg.norm(cx[:, iu] - cx[:, ju], axis=-1).max(axis=1)
    _freeze(
        mesh.face_areas, mesh.face_centers, mesh.face_normals, mesh.face_sign,
        mesh.normals, mesh.volumes, mesh.centroids, mesh.diameters,
    )
    return mesh


# --------------------------------------------------------------------------
# generators


def _orient_2d(nodes: np.ndarray, cells: np.ndarray) -> np.ndarray:
    x = nodes[cells]
    xs, ys = x[..., 0], x[..., 1]
    signed = 0.5 * np.sum(xs * np.roll(ys, -1, axis=1) - np.roll(xs, -1, axis=1) * ys, axis=1)
    cells = cells.copy()
    flip = signed < 0
    cells[flip] = cells[flip][:, ::-1]
    return cells


def grid_2d(nx: int, ny: int, kind: str = "quad") -> Mesh:
    """Uniform ``nx`` x ``ny`` grid on the unit square.

    ``kind='tri'`` cuts every square into four triangles along both
    diagonals, adding the square centre as a node.
    """
    if nx < 1 or ny < 1:
        raise MeshError("grid needs at least one cell per direction")
    xs = np.linspace(0.0, 1.0, nx + 1)
    ys = np.linspace(0.0, 1.0, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    i, j = np.meshgrid(np.arange(nx), np.arange(ny), indexing="xy")
    i, j = i.ravel(), j.ravel()
    n0 = j * (nx + 1) + i
    quads = np.column_stack([n0, n0 + 1, n0 + nx + 2, n0 + nx + 1])
    if kind == "quad":
        return Mesh(nodes, quads, "quad")
    if kind != "tri":
        raise MeshError(f"unsupported 2D kind {kind!r}")
    centers = nodes[quads].mean(axis=1)
    c = len(nodes) + np.arange(len(quads))
    nodes = np.vstack([nodes, centers])
    tris = np.stack(
        [
            np.column_stack([quads[:, 0], quads[:, 1], c]),
            np.column_stack([quads[:, 1], quads[:, 2], c]),
            np.column_stack([quads[:, 2], quads[:, 3], c]),
            np.column_stack([quads[:, 3], quads[:, 0], c]),
        ],
        axis=1,
    ).reshape(-1, 3)
    return Mesh(nodes, tris, "tri")


def generate_structured_2d(r: int, kind: str = "quad", box=((0.0, 0.0), (1.0, 1.0))) -> Mesh:
    """Uniform mesh of an axis-aligned box with ``2**r`` cells per unit length
    of the shorter side."""
    if r < 0:
        raise MeshError("refinement level must be non-negative")
    lo, hi = np.asarray(box, dtype=float)
    ext = hi - lo
    if np.any(ext <= 0):
        raise MeshError(f"degenerate domain box {box}")
    counts = np.rint(ext / ext.min()).astype(int) * 2**r
    m = grid_2d(int(counts[0]), int(counts[1]), kind)
    return Mesh(lo + m.nodes * ext, m.cells, m.kind)


def map_mesh(mesh: Mesh, fn: Callable[[np.ndarray], np.ndarray]) -> Mesh:
    """Move every node through ``fn`` (vectorised over an (n, nsd) array)."""
    return mesh.with_nodes(fn(mesh.nodes))


def _hex_grid(nx: int, ny: int, nz: int):
    xs, ys, zs = (np.linspace(0.0, 1.0, n + 1) for n in (nx, ny, nz))
    Z, Y, X = np.meshgrid(zs, ys, xs, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    k, j, i = np.meshgrid(np.arange(nz), np.arange(ny), np.arange(nx), indexing="ij")
    i, j, k = i.ravel(), j.ravel(), k.ravel()
    sx, sy = 1, nx + 1
    sz = (nx + 1) * (ny + 1)
    n0 = k * sz + j * sy + i
    hexes = np.column_stack(
        [n0, n0 + sx, n0 + sx + sy, n0 + sy, n0 + sz, n0 + sz + sx, n0 + sz + sx + sy, n0 + sz + sy]
    )
    return nodes, hexes


def split_hex_to_tets(nodes: np.ndarray, hexes: np.ndarray):
    """Split each hexahedron into 24 tetrahedra through its face and cell
    centres. Face centres are shared between neighbouring hexahedra."""
    loc = LOCAL_FACES["hex"]
    nh = len(hexes)
    fnodes = hexes[:, loc]  # (nh, 6, 4)
    keys = np.sort(fnodes.reshape(-1, 4), axis=1)
    uniq, first, inv = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inv = inv.reshape(nh, 6)
    fcent = nodes[fnodes.reshape(-1, 4)[first]].mean(axis=1)
    ccent = nodes[hexes].mean(axis=1)
    nn = len(nodes)
    all_nodes = np.vstack([nodes, fcent, ccent])
    fc_id = nn + inv
    cc_id = nn + len(uniq) + np.arange(nh)
    tets = []
    for f in range(6):
        for k in range(4):
            a = fnodes[:, f, k]
            b = fnodes[:, f, (k + 1) % 4]
            # outward face ordering (a, b, fc) seen from the cell centre
            tets.append(np.column_stack([cc_id, a, fc_id[:, f], b]))
    tets = np.stack(tets, axis=1).reshape(-1, 4)
    return all_nodes, _orient_tets(all_nodes, tets)


def _orient_tets(nodes, tets):
    x = nodes[tets]
    det = np.einsum("ij,ij->i", np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0]), x[:, 3] - x[:, 0])
    tets = tets.copy()
    flip = det < 0
    tets[flip] = tets[flip][:, [0, 2, 1, 3]]
    return tets


def generate_structured_3d(level: int, kind: str = "hex", box=((-1.0, -1.0, 0.0), (1.0, 1.0, 10.0))) -> Mesh:
    """Structured hexahedral or tetrahedral mesh of an axis-aligned box.

    Level 1 uses cubes whose side equals the shortest box extent (5 cubes
    on the default 2 x 2 x 10 beam); each further level halves the size.
    Tetrahedral meshes split every hexahedron into 24 tetrahedra.
    """
    if level < 1:
        raise MeshError("3D levels start at 1")
    if kind not in ("hex", "tet"):
        raise MeshError(f"unsupported 3D kind {kind!r}")
    lo, hi = np.asarray(box, dtype=float)
    ext = hi - lo
    if np.any(ext <= 0):
        raise MeshError(f"degenerate domain box {box}")
    counts = np.rint(ext / ext.min()).astype(int) * 2 ** (level - 1)
    nodes, hexes = _hex_grid(*counts)
    nodes = lo + nodes * ext
    if kind == "hex":
        return Mesh(nodes, hexes, "hex")
    nodes, tets = split_hex_to_tets(nodes, hexes)
    return Mesh(nodes, tets, "tet")


def graded_coordinates(n: int, stretch: float) -> np.ndarray:
    """``n + 1`` points on [-1, 1] clustered symmetrically towards both ends.

    ``stretch`` is the ratio between the central and the end spacing of the
    underlying tanh law; ``stretch = 1`` gives uniform spacing.
    """
    if n < 1:
        raise MeshError("need at least one interval")
    if stretch < 1:
        raise MeshError("stretch must be >= 1")
    s = np.linspace(-1.0, 1.0, n + 1)
    if stretch == 1:
        return s
    delta = np.arccosh(np.sqrt(stretch))
    x = np.tanh(delta * s) / np.tanh(delta)
    x[0], x[-1] = -1.0, 1.0
    return x


def generate_shell_mesh(
    n_theta: int,
    n_z: int,
    n_t: int,
    stretch: float = 1.0,
    radius: float = 1.0,
    thickness: float = 0.02,
    length: float = 5.0,
) -> Mesh:
    """Hexahedral mesh of a closed cylindrical shell centred on the x3 axis.

    The shell occupies ``radius -/+ thickness/2`` and ``|x3| <= length/2``;
    axial spacing is graded towards both ends by ``stretch``.
    """
    if n_theta < 3 or n_z < 1 or n_t < 1:
        raise MeshError("shell mesh needs n_theta >= 3, n_z >= 1, n_t >= 1")
    if not (radius > 0 and 0 < thickness < 2 * radius and length > 0):
        raise MeshError("invalid shell geometry")
    r = radius - thickness / 2 + thickness * np.arange(n_t + 1) / n_t
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = 0.5 * length * graded_coordinates(n_z, stretch)
    K, J, I = np.meshgrid(np.arange(n_z + 1), np.arange(n_theta), np.arange(n_t + 1), indexing="ij")
    R, TH, ZZ = r[I.ravel()], th[J.ravel()], z[K.ravel()]
    nodes = np.column_stack([R * np.cos(TH), R * np.sin(TH), ZZ])

    def nid(i, j, k):
        return (k * n_theta + j % n_theta) * (n_t + 1) + i

    k, j, i = np.meshgrid(np.arange(n_z), np.arange(n_theta), np.arange(n_t), indexing="ij")
    i, j, k = i.ravel(), j.ravel(), k.ravel()
    hexes = np.column_stack(
        [
            nid(i, j, k), nid(i + 1, j, k), nid(i + 1, j + 1, k), nid(i, j + 1, k),
            nid(i, j, k + 1), nid(i + 1, j, k + 1), nid(i + 1, j + 1, k + 1), nid(i, j + 1, k + 1),
        ]
    )
    return Mesh(nodes, hexes, "hex")


def distort_mesh(mesh: Mesh, seed: int, amplitude: float = 1.0 / 3.0) -> Mesh:
    """Randomly perturb interior nodes.

    Every interior node moves by an independent uniform vector in
    ``[-a h_min, a h_min]^nsd`` with ``h_min`` the shortest edge of the
    input mesh and ``a = amplitude``. Boundary nodes stay put.
    """
    rng = np.random.default_rng(seed)
    hmin = mesh.min_edge_length()
    interior = np.ones(len(mesh.nodes), dtype=bool)
    interior[mesh.boundary_nodes()] = False
    shift = rng.uniform(-amplitude * hmin, amplitude * hmin, size=mesh.nodes.shape)
    nodes = mesh.nodes + np.where(interior[:, None], shift, 0.0)
    try:
        return mesh.with_nodes(nodes)
    except MeshError as exc:
        raise MeshError(f"distortion inverted the mesh: {exc}") from exc


# --------------------------------------------------------------------------
# boundary classification


Predicate = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoundaryRule:
    """Tags the boundary faces selected by ``where``.

    ``where`` is either a callable ``(barycentres, normals) -> bool mask``
    or the name of a face group stored on an imported mesh.
    """

    name: str
    tag: Tag
    where: Predicate | str


def on_plane(axis: int, value: float, tol: float = 1e-9) -> Predicate:
    return lambda x, n: np.abs(x[:, axis] - value) <= tol * max(1.0, abs(value))


def on_cylinder(radius: float, tol: float = 1e-2, axes=(0, 1)) -> Predicate:
    """Faces whose barycentre lies within ``tol * radius`` of the circle."""

    def pred(x, n):
        r = np.hypot(x[:, axes[0]], x[:, axes[1]])
        return np.abs(r - radius) <= tol * radius

    return pred


def everywhere(x, n):
    return np.ones(len(x), dtype=bool)


@dataclass(eq=False)
class FaceSets:
    """Face tags and the derived per-cell face sets.

    ``dof_face[f]`` is the block index of face ``f`` in the global system,
    ``-1`` for Dirichlet faces.
    """

    tags: np.ndarray
    groups: np.ndarray
    xi: np.ndarray
    dof_face: np.ndarray
    n_dof_faces: int

    @classmethod
    def from_tags(cls, tags: np.ndarray, groups: np.ndarray) -> "FaceSets":
        tags = np.asarray(tags, dtype=np.int8)
        xi = np.where(tags == Tag.NEUMANN, 1.0, 0.0)
        free = tags != Tag.DIRICHLET
        dof_face = -np.ones(len(tags), dtype=np.int64)
        dof_face[free] = np.arange(int(free.sum()))
        return cls(tags, np.asarray(groups, dtype=object), xi, dof_face, int(free.sum()))

    def per_cell(self, mesh: Mesh) -> dict[str, np.ndarray]:
        """Boolean (ne, nfe) masks: all/dirichlet/free/interior/neumann."""
        t = self.tags[mesh.elem_faces]
        return {
            "dirichlet": t == Tag.DIRICHLET,
            "free": t != Tag.DIRICHLET,
            "interior": t == Tag.INTERIOR,
            "neumann": (t == Tag.NEUMANN) | (t == Tag.SYMMETRY),
        }

    def faces_with(self, tag: Tag) -> np.ndarray:
        return np.flatnonzero(self.tags == tag)

    def n_dof(self, nsd: int) -> int:
        return nsd * self.n_dof_faces


_PRECEDENCE = {Tag.DIRICHLET: 0, Tag.NEUMANN: 1, Tag.SYMMETRY: 1}


def classify_faces(mesh: Mesh, rules: Sequence[BoundaryRule] | None = None) -> FaceSets:
    """Tag every boundary face.

    A Dirichlet rule wins over any other matching rule; otherwise the first
    matching rule wins. With ``rules=None`` the tags stored on the mesh are
    used as they are.
    """
    nf = mesh.n_faces
    bnd = mesh.boundary_faces
    if rules is None:
        if mesh.face_tags is None:
            raise ClassificationError("mesh carries no boundary tags and no rules were given")
        tags = np.asarray(mesh.face_tags, dtype=np.int8).copy()
        groups = np.asarray(mesh.face_groups, dtype=object).copy()
        tags[mesh.interior_faces] = Tag.INTERIOR
        missing = bnd[tags[bnd] <= 0]
        if missing.size:
            raise ClassificationError(f"untagged boundary faces: {missing[:20].tolist()}")
        return FaceSets.from_tags(tags, groups)

    tags = np.zeros(nf, dtype=np.int8)
    groups = np.full(nf, "", dtype=object)
    best = np.full(nf, 99)
    x = mesh.face_centers[bnd]
    n = mesh.boundary_normals()[bnd]
    for rule in rules:
        if isinstance(rule.where, str):
            if mesh.face_groups is None:
                raise ClassificationError(f"rule {rule.name!r} refers to a face group but the mesh has none")
            sel = np.asarray(mesh.face_groups, dtype=object)[bnd] == rule.where
        else:
            sel = np.asarray(rule.where(x, n), dtype=bool)
        rank = _PRECEDENCE[Tag(rule.tag)]
        take = sel & (rank < best[bnd])
        idx = bnd[take]
        tags[idx] = rule.tag
        groups[idx] = rule.name
        best[idx] = rank
    missing = bnd[tags[bnd] == 0]
    if missing.size:
        raise ClassificationError(f"untagged boundary faces: {missing[:20].tolist()}")
    return FaceSets.from_tags(tags, groups)


# --------------------------------------------------------------------------
# text format


TAG_NAMES = {Tag.DIRICHLET: "dirichlet", Tag.NEUMANN: "neumann", Tag.SYMMETRY: "symmetry"}
_TAG_BY_NAME = {v: k for k, v in TAG_NAMES.items()}


class MeshFormatError(MeshError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def write_mesh(path, mesh: Mesh, face_sets: FaceSets | None = None) -> None:
    """Write a mesh (and optional boundary tags) in the plain-text format.

    ::

        fcfv-mesh 1
        nodes <n> <nsd>
        <x> <y> [<z>]               one line per node
        cells <kind> <m>
        <i0> <i1> ...               zero-based node indices
        boundary <k>
        <i0> <i1> ... <tag> <group> tag: dirichlet|neumann|symmetry

    Lines starting with ``#`` and blank lines are ignored.
    """
    lines = ["fcfv-mesh 1", f"nodes {len(mesh.nodes)} {mesh.nsd}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in mesh.nodes]
    lines.append(f"cells {mesh.kind} {mesh.n_cells}")
    lines += [" ".join(str(int(v)) for v in row) for row in mesh.cells]
    if face_sets is not None:
        bnd = mesh.boundary_faces
        lines.append(f"boundary {len(bnd)}")
        for f in bnd:
            tag = TAG_NAMES[Tag(face_sets.tags[f])]
            group = face_sets.groups[f] or tag
            lines.append(" ".join(str(int(v)) for v in mesh.faces[f]) + f" {tag} {group}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path) -> Mesh:
    """Parse the plain-text mesh format written by :func:`write_mesh`."""
    with open(path) as fh:
        raw = fh.read().splitlines()
    rows = [(i + 1, ln.split()) for i, ln in enumerate(raw) if ln.strip() and not ln.lstrip().startswith("#")]
    pos = 0

    def take(expect: str):
        nonlocal pos
        if pos >= len(rows):
            raise MeshFormatError(f"unexpected end of file, expected {expect!r}")
        lineno, tok = rows[pos]
        if tok[0] != expect:
            raise MeshFormatError(f"expected {expect!r}, found {tok[0]!r}", lineno)
        pos += 1
        return lineno, tok

    lineno, tok = take("fcfv-mesh")
    try:
        lineno, tok = take("nodes")
        nn, nsd = int(tok[1]), int(tok[2])
        nodes = np.empty((nn, nsd))
        for k in range(nn):
            lineno, tok = rows[pos + k]
            if len(tok) != nsd:
                raise MeshFormatError(f"node needs {nsd} coordinates", lineno)
            nodes[k] = [float(v) for v in tok]
        pos += nn
        lineno, tok = take("cells")
        kind, ne = tok[1], int(tok[2])
        if kind not in CELL_NODES:
            raise MeshFormatError(f"unknown cell kind {kind!r}", lineno)
        cells = np.empty((ne, CELL_NODES[kind]), dtype=np.int64)
        for k in range(ne):
            lineno, tok = rows[pos + k]
            if len(tok) != CELL_NODES[kind]:
                raise MeshFormatError(f"{kind} cell needs {CELL_NODES[kind]} node indices", lineno)
            cells[k] = [int(v) for v in tok]
        pos += ne
        bfaces, btags, bgroups = [], [], []
        if pos < len(rows):
            lineno, tok = take("boundary")
            nb = int(tok[1])
            nvf = LOCAL_FACES[kind].shape[1]
            for k in range(nb):
                lineno, tok = rows[pos + k]
                if len(tok) not in (nvf + 1, nvf + 2):
                    raise MeshFormatError(f"boundary face needs {nvf} node indices and a tag", lineno)
                name = tok[nvf].lower()
                if name not in _TAG_BY_NAME:
                    raise MeshFormatError(f"unknown boundary tag {tok[nvf]!r}", lineno)
                bfaces.append(sorted(int(v) for v in tok[:nvf]))
                btags.append(_TAG_BY_NAME[name])
                bgroups.append(tok[nvf + 1] if len(tok) == nvf + 2 else name)
            pos += nb
    except IndexError:
        raise MeshFormatError("unexpected end of file") from None
    except ValueError as exc:
        if isinstance(exc, MeshFormatError):
            raise
        raise MeshFormatError(str(exc), lineno) from None

    if np.any(cells < 0) or np.any(cells >= nn):
        raise MeshFormatError("cell references a node index out of range")
    if kind in ("tri", "quad"):
        cells = _orient_2d(nodes, cells)
    elif kind == "tet":
        cells = _orient_tets(nodes, cells)
    mesh = Mesh(nodes, cells, kind)
    if not bfaces:
        return mesh
    tags = np.zeros(mesh.n_faces, dtype=np.int8)
    groups = np.full(mesh.n_faces, "", dtype=object)
    lookup = {tuple(sorted(f)): i for i, f in zip(mesh.boundary_faces, mesh.faces[mesh.boundary_faces].tolist())}
    for f, t, g in zip(bfaces, btags, bgroups):
        idx = lookup.get(tuple(f))
        if idx is None:
            raise MeshFormatError(f"boundary entry {f} is not a boundary face of the mesh")
        tags[idx], groups[idx] = t, g
    return Mesh(mesh.nodes, mesh.cells, kind, tags, groups)

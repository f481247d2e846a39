"""Generate the unstructured Kirsch plate meshes shipped in src/fcfv/data.

Quarter plate [0, L]^2 minus the disc of radius a, triangulated with
scipy's Delaunay on a point cloud graded towards the hole. Run from the
repository root:

    python tools/make_kirsch_fixtures.py

Output is deterministic (no randomness involved).
"""

from __future__ import annotations

import pathlib

import numpy as np
from scipy.spatial import Delaunay

from fcfv.benchmarks import kirsch_case
from fcfv.mesh import Mesh, classify_faces, write_mesh

L, A = 4.0, 1.0
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "fcfv" / "data"


def spacing(r, h_far, h_hole):
    """Target edge length: ``h_hole`` at the hole growing linearly to ``h_far``.

    The growth rate scales with ``h_hole`` so that halving both halves the
    size field everywhere.
    """
    return np.minimum(h_far, h_hole * (1.0 + 2.0 * (r - A)))


def segment(p, q, h_fn):
    """Points on the segment p->q (endpoints excluded) following the size field."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    length = np.linalg.norm(q - p)
    s, out = 0.0, []
    while True:
        x = p + (q - p) * s / length
        s += float(h_fn(np.hypot(*x)))
        if s >= length - 0.5 * float(h_fn(np.hypot(*q))):
            break
        out.append(p + (q - p) * s / length)
    return out


def point_cloud(h_far, h_hole):
    h = lambda r: spacing(r, h_far, h_hole)
    pts = []
    # hole arc
    n_arc = int(np.ceil(0.5 * np.pi * A / h_hole))
    t = np.linspace(0.0, 0.5 * np.pi, n_arc + 1)
    pts += list(np.column_stack([A * np.cos(t), A * np.sin(t)]))
    # straight boundaries
    corners = [(A, 0.0), (L, 0.0), (L, L), (0.0, L), (0.0, A)]
    pts += [np.array(c) for c in corners[1:4]]
    for p, q in zip(corners[:-1], corners[1:]):
        pts += segment(p, q, h)
    # interior: concentric arcs clipped to the square
    r = A
    while True:
        r += float(h(r))
        if r > L * np.sqrt(2.0):
            break
        hr = float(h(r))
        n = max(2, int(np.ceil(0.5 * np.pi * r / hr)))
        t = (np.arange(n) + 0.5) * 0.5 * np.pi / n
        cand = np.column_stack([r * np.cos(t), r * np.sin(t)])
        keep = np.all(cand > 0.5 * hr, axis=1) & np.all(cand < L - 0.5 * hr, axis=1)
        pts += list(cand[keep])
    return np.unique(np.round(np.array(pts), 12), axis=0)


def build(h_far, h_hole) -> Mesh:
    pts = point_cloud(h_far, h_hole)
    tri = Delaunay(pts).simplices
    c = pts[tri].mean(axis=1)
    tri = tri[np.hypot(c[:, 0], c[:, 1]) > A]
    used = np.unique(tri)
    remap = -np.ones(len(pts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    mesh = Mesh(pts[used], remap[tri], "tri")
    # every boundary edge must lie on one of the four boundary pieces
    x = mesh.nodes[mesh.faces[mesh.boundary_faces]]
    r = np.hypot(x[..., 0], x[..., 1])
    on_piece = (
        np.all(np.isclose(r, A), axis=1)
        | np.all(np.isclose(x[..., 0], 0.0), axis=1)
        | np.all(np.isclose(x[..., 1], 0.0), axis=1)
        | np.all(np.isclose(x[..., 0], L), axis=1)
        | np.all(np.isclose(x[..., 1], L), axis=1)
    )
    if not on_piece.all():
        raise RuntimeError("triangulation has a boundary edge off the geometry")
    return mesh


LEVELS = {1: (0.2, 0.05), 2: (0.1, 0.025), 3: (0.05, 0.0125)}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    case = kirsch_case()
    for level, (h_far, h_hole) in LEVELS.items():
        mesh = build(h_far, h_hole)
        fs = classify_faces(mesh, case.rules)
        path = OUT / f"kirsch_{level}.mesh"
        write_mesh(path, mesh, fs)
        print(f"{path.name}: {mesh.n_cells} triangles, {len(mesh.nodes)} nodes, h = {mesh.h:.4f}")


if __name__ == "__main__":
    main()

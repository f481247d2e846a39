import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fcfv.mesh import (
    BoundaryRule,
    ClassificationError,
    Mesh,
    MeshError,
    MeshFormatError,
    Tag,
    classify_faces,
    distort_mesh,
    everywhere,
    generate_shell_mesh,
    generate_structured_2d,
    generate_structured_3d,
    graded_coordinates,
    on_plane,
    read_mesh,
    write_mesh,
)

UNIT3 = ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))


def _check_invariants(mesh: Mesh, measure: float):
    # closed cells: outward normals weighted by area sum to zero
    closure = np.einsum("ej,ejk->ek", mesh.face_areas[mesh.elem_faces], mesh.normals)
    assert np.abs(closure).max() < 1e-12 * mesh.h ** (mesh.nsd - 1) * 10
    assert np.all(mesh.volumes > 0)
    assert np.isclose(mesh.volumes.sum(), measure, rtol=1e-12)
    # every face has one or two cells, interior faces see opposite normals
    owners = (mesh.face_elems >= 0).sum(axis=1)
    assert set(np.unique(owners)) <= {1, 2}
    interior = mesh.interior_faces
    e0, e1 = mesh.face_elems[interior].T
    j0 = np.argmax(mesh.elem_faces[e0] == interior[:, None], axis=1)
    j1 = np.argmax(mesh.elem_faces[e1] == interior[:, None], axis=1)
    assert np.allclose(mesh.normals[e0, j0], -mesh.normals[e1, j1])
    # outward: normal points away from the cell centroid
    fc = mesh.face_centers[mesh.elem_faces]
    assert np.all(np.einsum("ejk,ejk->ej", fc - mesh.centroids[:, None], mesh.normals) > 0)


@pytest.mark.parametrize("kind,r,cells,faces", [("quad", 2, 16, 40), ("tri", 2, 64, 104), ("quad", 0, 1, 4)])
def test_structured_2d_counts(kind, r, cells, faces):
    m = generate_structured_2d(r, kind)
    assert (m.n_cells, m.n_faces) == (cells, faces)
    _check_invariants(m, 1.0)


def test_structured_2d_h():
    assert np.isclose(generate_structured_2d(3, "quad").h, np.sqrt(2) / 8)


@pytest.mark.parametrize("kind,cells", [("hex", 8), ("tet", 192)])
def test_structured_3d_counts(kind, cells):
    m = generate_structured_3d(2, kind, UNIT3)
    assert m.n_cells == cells
    _check_invariants(m, 1.0)


def test_beam_box_level_one():
    m = generate_structured_3d(1, "hex")
    assert m.n_cells == 5
    assert np.isclose(m.volumes.sum(), 40.0)


def test_shell_mesh_volume_and_counts():
    m = generate_shell_mesh(40, 6, 2, stretch=5.0, radius=1.0, thickness=0.1, length=2.0)
    assert m.n_cells == 40 * 6 * 2
    # polygonal annulus area times length
    r_in, r_out = 0.95, 1.05
    area = 0.5 * 40 * np.sin(2 * np.pi / 40) * (r_out**2 - r_in**2)
    _check_invariants(m, area * 2.0)


def test_graded_coordinates():
    x = graded_coordinates(10, 8.0)
    assert x[0] == -1 and x[-1] == 1
    dx = np.diff(x)
    assert np.all(dx > 0) and np.allclose(dx, dx[::-1])
    assert dx[0] < dx[5]
    assert np.allclose(graded_coordinates(4, 1.0), np.linspace(-1, 1, 5))
    with pytest.raises(MeshError):
        graded_coordinates(4, 0.5)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), r=st.integers(1, 4), kind=st.sampled_from(["quad", "tri"]))
def test_distortion_keeps_invariants(seed, r, kind):
    m = generate_structured_2d(r, kind)
    d = distort_mesh(m, seed)
    _check_invariants(d, 1.0)
    bnd = m.boundary_nodes()
    assert np.array_equal(d.nodes[bnd], m.nodes[bnd])
    assert np.array_equal(distort_mesh(m, seed).nodes, d.nodes)


@pytest.mark.parametrize("kind", ["hex", "tet"])
def test_distortion_3d(kind):
    d = distort_mesh(generate_structured_3d(2, kind, UNIT3), seed=11)
    _check_invariants(d, 1.0)


def test_inverted_cell_rejected():
    nodes = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(MeshError):
        Mesh(nodes, np.array([[0, 2, 1]]), "tri")
    with pytest.raises(MeshError):
        Mesh(nodes, np.array([[0, 1, 5]]), "tri")
    with pytest.raises(MeshError):
        Mesh(nodes, np.array([[0, 1, 2]]), "pentagon")


def test_classification_precedence_and_missing():
    m = generate_structured_2d(2)
    rules = [
        BoundaryRule("bottom", Tag.NEUMANN, on_plane(1, 0.0)),
        BoundaryRule("left", Tag.DIRICHLET, on_plane(0, 0.0)),
    ]
    with pytest.raises(ClassificationError):
        classify_faces(m, rules)
    fs = classify_faces(m, rules + [BoundaryRule("rest", Tag.NEUMANN, everywhere)])
    bnd = m.boundary_faces
    corner = bnd[np.all(np.isclose(m.face_centers[bnd], [0.0, 0.125]), axis=1)]
    assert fs.tags[corner[0]] == Tag.DIRICHLET
    assert fs.n_dof_faces == m.n_faces - 4
    assert np.all(fs.tags[m.interior_faces] == Tag.INTERIOR)
    assert set(fs.groups[bnd]) == {"bottom", "left", "rest"}


def test_classification_without_rules_or_tags():
    with pytest.raises(ClassificationError):
        classify_faces(generate_structured_2d(1))


@pytest.mark.parametrize("kind", ["quad", "tri", "hex", "tet"])
def test_round_trip(tmp_path, kind):
    m = generate_structured_2d(2, kind) if kind in ("quad", "tri") else generate_structured_3d(1, kind, UNIT3)
    m = distort_mesh(m, 4)
    fs = classify_faces(m, [BoundaryRule("fix", Tag.DIRICHLET, on_plane(0, 0.0)), BoundaryRule("free", Tag.NEUMANN, everywhere)])
    path = tmp_path / "m.mesh"
    write_mesh(path, m, fs)
    back = read_mesh(path)
    assert np.array_equal(back.nodes, m.nodes)
    assert np.array_equal(back.cells, m.cells)
    for name in ("volumes", "face_areas", "normals", "centroids"):
        assert np.array_equal(getattr(back, name), getattr(m, name))
    again = classify_faces(back)
    assert np.array_equal(again.tags, fs.tags)
    assert np.array_equal(again.groups, fs.groups)
    assert back.digest() == m.digest()


def test_read_orients_clockwise_cells(tmp_path):
    path = tmp_path / "cw.mesh"
    path.write_text("fcfv-mesh 1\nnodes 3 2\n0 0\n1 0\n0 1\ncells tri 1\n0 2 1\n")
    m = read_mesh(path)
    assert m.volumes[0] > 0


def test_untagged_boundary_face_is_reported(tmp_path):
    path = tmp_path / "partial.mesh"
    path.write_text(
        "fcfv-mesh 1\nnodes 4 2\n0 0\n1 0\n1 1\n0 1\ncells quad 1\n0 1 2 3\n"
        "boundary 3\n0 1 dirichlet\n1 2 neumann\n2 3 neumann\n"
    )
    with pytest.raises(ClassificationError, match="untagged"):
        classify_faces(read_mesh(path))


@pytest.mark.parametrize(
    "text,line",
    [
        ("fcfv-mesh 1\nnodes 2 2\n0 0\n1\n", 4),
        ("fcfv-mesh 1\nnodes 1 2\n0 0\ncells hexagon 1\n0\n", 4),
        ("fcfv-mesh 1\nnodes 3 2\n0 0\n1 0\n0 1\ncells tri 1\n0 1\n", 7),
        ("fcfv-mesh 1\nnodes 3 2\n0 0\n1 0\n0 x\n", 5),
        ("fcfv-mesh 1\nnodes 3 2\n0 0\n1 0\n0 1\ncells tri 1\n0 1 2\nboundary 1\n0 1 glue\n", 9),
    ],
)
def test_parse_errors_carry_line_numbers(tmp_path, text, line):
    path = tmp_path / "bad.mesh"
    path.write_text(text)
    with pytest.raises(MeshFormatError) as info:
        read_mesh(path)
    assert info.value.line == line


def test_parse_errors_without_line(tmp_path):
    path = tmp_path / "bad.mesh"
    path.write_text("fcfv-mesh 1\nnodes 3 2\n0 0\n1 0\n0 1\ncells tri 1\n0 1 7\n")
    with pytest.raises(MeshFormatError, match="out of range"):
        read_mesh(path)
    path.write_text("fcfv-mesh 1\nnodes 3 2\n0 0\n1 0\n0 1\ncells tri 1\n0 1 2\nboundary 1\n0 9 neumann\n")
    with pytest.raises(MeshFormatError, match="not a boundary face"):
        read_mesh(path)

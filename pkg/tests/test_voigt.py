import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from fcfv.voigt import (
    DecompositionError,
    Material,
    MaterialError,
    Model,
    NormalError,
    elasticity_matrix,
    normal_matrix,
    projection_matrices,
    sqrt_elasticity_matrix,
    stress_from_mixed,
    symmetric_gradient,
    voigt_to_tensor,
    von_mises,
)

from oracles import hooke


@pytest.mark.parametrize("model", list(Model), ids=lambda m: m.value)
def test_elasticity_matrix_matches_lame_form(model):
    mat = Material(7.0, 0.27, model)
    assert np.allclose(elasticity_matrix(mat), hooke(7.0, 0.27, model.value), rtol=1e-14)


def test_plane_stress_symbolic():
    E, nu = sp.symbols("E nu", positive=True)
    D = E / (1 - nu**2) * sp.Matrix([[1, nu, 0], [nu, 1, 0], [0, 0, (1 - nu) / 2]])
    num = np.array(D.subs({E: 3, nu: sp.Rational(1, 4)}), dtype=float)
    assert np.allclose(elasticity_matrix(Material(3.0, 0.25, Model.PLANE_STRESS)), num, rtol=1e-14)


@settings(max_examples=50, deadline=None)
@given(
    E=st.floats(1e-3, 1e6),
    nu=st.floats(-0.99, 0.4999999),
    model=st.sampled_from(list(Model)),
)
def test_sqrt_squares_back(E, nu, model):
    D = elasticity_matrix(Material(E, nu, model))
    Dt = sqrt_elasticity_matrix(D)
    assert np.allclose(Dt, Dt.T, rtol=0, atol=1e-14 * np.abs(Dt).max())
    assert np.allclose(Dt @ Dt, D, rtol=0, atol=1e-10 * np.abs(D).max())
    assert np.linalg.eigvalsh(Dt).min() > 0


def test_sqrt_rejects_bad_input():
    with pytest.raises(DecompositionError):
        sqrt_elasticity_matrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DecompositionError):
        sqrt_elasticity_matrix(np.diag([1.0, -1.0]))
    with pytest.raises(DecompositionError):
        sqrt_elasticity_matrix(np.ones(3))


@pytest.mark.parametrize("nsd", [2, 3])
def test_normal_matrix_gives_traction(nsd):
    rng = np.random.default_rng(nsd)
    n = rng.normal(size=nsd)
    n /= np.linalg.norm(n)
    S = rng.normal(size=(nsd, nsd))
    S = S + S.T
    # Voigt stress stores each shear component once
    sv = np.array([S[0, 0], S[1, 1], S[0, 1]]) if nsd == 2 else np.array(
        [S[0, 0], S[1, 1], S[2, 2], S[0, 1], S[0, 2], S[1, 2]]
    )
    assert np.allclose(normal_matrix(n).T @ sv, S @ n)
    assert np.allclose(voigt_to_tensor(sv), S)


def test_normal_matrix_requires_unit_normal():
    with pytest.raises(NormalError):
        normal_matrix(np.array([1.0, 1.0]))
    with pytest.raises(NormalError):
        normal_matrix(np.array([1.0, 0, 0, 0]) / 1.0)


def test_projections():
    n = np.array([0.6, 0.8])
    Pn, Pt = projection_matrices(n)
    assert np.allclose(Pn + Pt, np.eye(2))
    assert np.allclose(Pn @ Pn, Pn)
    assert np.allclose(Pt @ n, 0)


def test_symmetric_gradient_engineering_shear():
    g = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(symmetric_gradient(g), [1.0, 4.0, 5.0])


def test_stress_recovery_inverts_mixed_variable():
    mat = Material(2.0, 0.3, Model.THREE_D)
    D = elasticity_matrix(mat)
    Dt = sqrt_elasticity_matrix(D)
    eps = np.random.default_rng(0).normal(size=6)
    L = -Dt @ eps
    assert np.allclose(stress_from_mixed(L, Dt), D @ eps)
    with pytest.raises(ValueError):
        stress_from_mixed(np.zeros(3), Dt)


def test_von_mises_uniaxial_and_shear():
    assert np.isclose(von_mises(np.array([5.0, 0, 0, 0, 0, 0])), 5.0)
    assert np.isclose(von_mises(np.array([0, 0, 2.0])), 2.0 * np.sqrt(3.0))
    strain = Material(1.0, 0.3, Model.PLANE_STRAIN)
    # plane strain adds s33 = nu (s11 + s22)
    assert np.isclose(von_mises(np.array([1.0, 1.0, 0.0]), strain), 0.4)


def test_material_validation():
    with pytest.raises(MaterialError):
        Material(-1.0, 0.3)
    with pytest.raises(MaterialError):
        Material(1.0, 0.5)
    with pytest.raises(MaterialError):
        Material(1.0, -1.0)
    assert Material(1.0, 0.3, "plane_stress").model is Model.PLANE_STRESS
    with pytest.raises(ValueError):
        elasticity_matrix(Material(1.0, 0.3, Model.THREE_D), nsd=2)

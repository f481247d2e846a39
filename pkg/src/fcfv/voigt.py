"""Voigt-notation algebra for isotropic linear elasticity.

Symmetric tensors are stored as vectors of their non-redundant entries,
``[s11, s22, s12]`` in 2D and ``[s11, s22, s33, s12, s13, s23]`` in 3D.
Shear strains are engineering strains (``gamma_ij = 2 eps_ij``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Model(enum.Enum):
    PLANE_STRESS = "plane_stress"
    PLANE_STRAIN = "plane_strain"
    THREE_D = "3d"

    @property
    def nsd(self) -> int:
        return 3 if self is Model.THREE_D else 2

    @property
    def msd(self) -> int:
        n = self.nsd
        return n * (n + 1) // 2


class MaterialError(ValueError):
    pass


class DecompositionError(ValueError):
    pass


class NormalError(ValueError):
    pass


@dataclass(frozen=True)
class Material:
    """Homogeneous isotropic material."""

    young_modulus: float
    poisson_ratio: float
    model: Model = Model.THREE_D

    def __post_init__(self):
        if isinstance(self.model, str):
            object.__setattr__(self, "model", Model(self.model))
        if not self.young_modulus > 0:
            raise MaterialError(f"Young modulus must be positive, got {self.young_modulus}")
        if self.poisson_ratio == 0.5:
            raise MaterialError("poisson_ratio = 0.5 gives a singular elasticity matrix")
        if not -1.0 < self.poisson_ratio < 0.5:
            raise MaterialError(f"poisson_ratio must lie in (-1, 0.5), got {self.poisson_ratio}")

    @property
    def nsd(self) -> int:
        return self.model.nsd

    @property
    def msd(self) -> int:
        return self.model.msd

    @property
    def shear_modulus(self) -> float:
        return self.young_modulus / (2.0 * (1.0 + self.poisson_ratio))

    def scaled(self, factor: float) -> "Material":
        return Material(self.young_modulus * factor, self.poisson_ratio, self.model)


def elasticity_matrix(material: Material, nsd: int | None = None) -> np.ndarray:
    """Hooke's law in Voigt form, ``sigma_V = D @ eps_V``.

    ``nsd`` may be passed to assert the expected dimension; a mismatch with
    the material model raises ``MaterialError``.
    """
    if nsd is not None and nsd != material.nsd:
        raise MaterialError(
            f"material model {material.model.value} is {material.nsd}D, requested {nsd}D"
        )
    E, nu = material.young_modulus, material.poisson_ratio
    if material.model is Model.THREE_D:
        c = E / ((1.0 + nu) * (1.0 - 2.0 * nu))
        D = np.zeros((6, 6))
        D[:3, :3] = nu
        D[[0, 1, 2], [0, 1, 2]] = 1.0 - nu
        D[[3, 4, 5], [3, 4, 5]] = (1.0 - 2.0 * nu) / 2.0
        return c * D
    theta = 1.0 if material.model is Model.PLANE_STRESS else 2.0
    c = E / ((1.0 + nu) * (1.0 - theta * nu))
    a = 1.0 + (1.0 - theta) * nu
    return c * np.array(
        [
            [a, nu, 0.0],
            [nu, a, 0.0],
            [0.0, 0.0, (1.0 - theta * nu) / 2.0],
        ]
    )


def sqrt_elasticity_matrix(D: np.ndarray) -> np.ndarray:
    """Symmetric square root ``V diag(sqrt(lam)) V^T`` of an SPD matrix."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DecompositionError(f"expected a square matrix, got shape {D.shape}")
    scale = np.linalg.norm(D)
    if not np.allclose(D, D.T, rtol=0.0, atol=1e-14 * scale):
        raise DecompositionError("matrix is not symmetric")
    lam, V = np.linalg.eigh(D)
    if lam.min() < -1e-10 * scale:
        raise DecompositionError(f"matrix is indefinite (min eigenvalue {lam.min():.3e})")
    lam = np.maximum(lam, 1e-300)
    Dt = (V * np.sqrt(lam)) @ V.T
    return 0.5 * (Dt + Dt.T)


def _check_unit(n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    norms = np.linalg.norm(n, axis=-1)
    if np.any(np.abs(norms - 1.0) > 1e-12):
        raise NormalError(f"normal must have unit length, got |n| = {norms}")
    return n


def normal_matrix(n: np.ndarray) -> np.ndarray:
    """Voigt normal matrix ``N`` (msd x nsd) with ``N^T s_V = S n``.

    Accepts a single normal or a stack of shape ``(..., nsd)``.
    """
    n = _check_unit(n)
    return _normal_matrix(n)


def _normal_matrix(n: np.ndarray) -> np.ndarray:
    nsd = n.shape[-1]
    if nsd == 2:
        N = np.zeros(n.shape[:-1] + (3, 2))
        N[..., 0, 0] = n[..., 0]
        N[..., 1, 1] = n[..., 1]
        N[..., 2, 0] = n[..., 1]
        N[..., 2, 1] = n[..., 0]
        return N
    if nsd == 3:
        N = np.zeros(n.shape[:-1] + (6, 3))
        N[..., 0, 0] = n[..., 0]
        N[..., 1, 1] = n[..., 1]
        N[..., 2, 2] = n[..., 2]
        N[..., 3, 0] = n[..., 1]
        N[..., 3, 1] = n[..., 0]
        N[..., 4, 0] = n[..., 2]
        N[..., 4, 2] = n[..., 0]
        N[..., 5, 1] = n[..., 2]
        N[..., 5, 2] = n[..., 1]
        return N
    raise NormalError(f"normals must be 2D or 3D, got {nsd} components")


def projection_matrices(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normal and tangential projectors ``(n (x) n, I - n (x) n)``."""
    n = _check_unit(n)
    Pn = n[..., :, None] * n[..., None, :]
    Pt = np.eye(n.shape[-1]) - Pn
    return Pn, Pt


def stress_from_mixed(L: np.ndarray, D_tilde: np.ndarray) -> np.ndarray:
    """Stress from the mixed variable: ``sigma_V = -D_tilde @ L``.

    ``L`` may be a stack of shape ``(..., msd)``.
    """
    L = np.asarray(L, dtype=float)
    if L.shape[-1] != D_tilde.shape[0]:
        raise ValueError(f"mixed variable has {L.shape[-1]} components, D_tilde is {D_tilde.shape}")
    return -L @ D_tilde.T


def symmetric_gradient(grad_u: np.ndarray) -> np.ndarray:
    """Voigt strain from a displacement gradient ``grad_u[..., i, j] = du_i/dx_j``."""
    g = np.asarray(grad_u, dtype=float)
    nsd = g.shape[-1]
    if nsd == 2:
        return np.stack([g[..., 0, 0], g[..., 1, 1], g[..., 0, 1] + g[..., 1, 0]], axis=-1)
    return np.stack(
        [
            g[..., 0, 0],
            g[..., 1, 1],
            g[..., 2, 2],
            g[..., 0, 1] + g[..., 1, 0],
            g[..., 0, 2] + g[..., 2, 0],
            g[..., 1, 2] + g[..., 2, 1],
        ],
        axis=-1,
    )


def voigt_to_tensor(s: np.ndarray) -> np.ndarray:
    """Full symmetric tensor from a Voigt stress vector (shear stored once)."""
    s = np.asarray(s, dtype=float)
    if s.shape[-1] == 3:
        S = np.empty(s.shape[:-1] + (2, 2))
        S[..., 0, 0], S[..., 1, 1] = s[..., 0], s[..., 1]
        S[..., 0, 1] = S[..., 1, 0] = s[..., 2]
        return S
    S = np.empty(s.shape[:-1] + (3, 3))
    S[..., 0, 0], S[..., 1, 1], S[..., 2, 2] = s[..., 0], s[..., 1], s[..., 2]
    S[..., 0, 1] = S[..., 1, 0] = s[..., 3]
    S[..., 0, 2] = S[..., 2, 0] = s[..., 4]
    S[..., 1, 2] = S[..., 2, 1] = s[..., 5]
    return S


def von_mises(s: np.ndarray, material: Material | None = None) -> np.ndarray:
    """Von Mises equivalent stress.

    2D stresses are embedded in 3D according to the material model:
    ``s33 = 0`` for plane stress (and when no material is given), and
    ``s33 = nu (s11 + s22)`` for plane strain.
    """
    s = np.asarray(s, dtype=float)
    if s.shape[-1] == 3:
        s33 = np.zeros(s.shape[:-1])
        if material is not None and material.model is Model.PLANE_STRAIN:
            s33 = material.poisson_ratio * (s[..., 0] + s[..., 1])
        zero = np.zeros_like(s33)
        s = np.stack([s[..., 0], s[..., 1], s33, s[..., 2], zero, zero], axis=-1)
    s11, s22, s33, s12, s13, s23 = np.moveaxis(s, -1, 0)
    j2 = ((s11 - s22) ** 2 + (s22 - s33) ** 2 + (s33 - s11) ** 2) / 6.0 + s12**2 + s13**2 + s23**2
    return np.sqrt(3.0 * np.maximum(j2, 0.0))

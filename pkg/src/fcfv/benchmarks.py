"""Benchmark problems with closed-form or reference solutions.

Each factory returns a :class:`BenchmarkCase`: material, boundary rules,
loads, optional exact displacement/stress callables and a mesh recipe.
Exact stresses are obtained by differentiating the displacement field
analytically and applying Hooke's law.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from . import mesh as meshmod
from .assembly import Loads, Problem, Stabilization
from .mesh import BoundaryRule, Mesh, Tag, classify_faces, everywhere, on_plane
from .voigt import Material, Model, _normal_matrix, elasticity_matrix, symmetric_gradient


@dataclass
class BenchmarkCase:
    name: str
    material: Material
    rules: list[BoundaryRule]
    loads: Loads
    make_mesh: Callable[..., Mesh]  # (level, kind, seed) -> Mesh
    exact_displacement: Callable | None = None
    exact_gradient: Callable | None = None
    reference: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    length_scale: float = 1.0
    kinds: tuple[str, ...] = ("quad", "tri")
    radial: Callable | None = None
    # (mesh, Result) -> (name, value) of the case's reference scalar
    scalar: Callable | None = None

    def mesh(self, level: int, kind: str | None = None, seed: int | None = None) -> Mesh:
        kind = kind or self.kinds[0]
        if kind not in self.kinds:
            raise ValueError(f"case {self.name!r} supports element kinds {', '.join(self.kinds)}, not {kind!r}")
        return self.make_mesh(level, kind, seed)

    def mesh_label(self, level, kind: str | None = None, seed: int | None = None) -> str:
        tag = "x".join(str(v) for v in level) if isinstance(level, (tuple, list)) else f"L{level}"
        label = f"{kind or self.kinds[0]}-{tag}"
        return label if seed is None else f"{label}-s{seed}"

    def exact_stress(self, x: np.ndarray) -> np.ndarray:
        if self.exact_gradient is None:
            raise ValueError(f"case {self.name!r} has no exact solution")
        return symmetric_gradient(self.exact_gradient(x)) @ elasticity_matrix(self.material).T

    def exact_traction(self, x: np.ndarray, n: np.ndarray) -> np.ndarray:
        return np.einsum("eml,em->el", _normal_matrix(n), self.exact_stress(x))

    def problem(self, mesh: Mesh, tau: float = 3.0, length_scale: float | None = None, material: Material | None = None) -> Problem:
        ell = self.length_scale if length_scale is None else length_scale
        rules = self.rules if mesh.face_tags is None else None
        fs = classify_faces(mesh, rules)
        return Problem(mesh, fs, material or self.material, self.loads, Stabilization(tau, ell))

    def metadata(self) -> dict:
        m = self.material
        return {
            "case": self.name,
            "young_modulus": m.young_modulus,
            "poisson_ratio": m.poisson_ratio,
            "model": m.model.value,
            "length_scale": self.length_scale,
            **self.params,
        }


# --------------------------------------------------------------------------
# manufactured polynomial solution on the unit square


def poly2d_fields():
    """Displacement, gradient and body-force callables for a given D.

    ``u1 = -p(x1) q(x2)``, ``u2 = q(x1) p(x2)`` with ``p = x^2 (x-1)^2`` and
    ``q = x (x-1) (2x-1)``.
    """
    x = Polynomial([0.0, 1.0])
    p = x**2 * (x - 1) ** 2
    q = x * (x - 1) * (2 * x - 1)
    dp, dq = p.deriv(), q.deriv()
    ddp, ddq = dp.deriv(), dq.deriv()

    def displacement(X):
        a, b = X[:, 0], X[:, 1]
        return np.column_stack([-p(a) * q(b), q(a) * p(b)])

    def gradient(X):
        a, b = X[:, 0], X[:, 1]
        g = np.empty((len(X), 2, 2))
        g[:, 0, 0] = -dp(a) * q(b)
        g[:, 0, 1] = -p(a) * dq(b)
        g[:, 1, 0] = dq(a) * p(b)
        g[:, 1, 1] = q(a) * dp(b)
        return g

    def body_force(D):
        def f(X):
            a, b = X[:, 0], X[:, 1]
            # derivatives of the Voigt strain
            de_da = np.column_stack([-ddp(a) * q(b), dq(a) * dp(b), -dp(a) * dq(b) + ddq(a) * p(b)])
            de_db = np.column_stack([-dp(a) * dq(b), q(a) * ddp(b), -p(a) * ddq(b) + dq(a) * dp(b)])
            ds_da = de_da @ D.T
            ds_db = de_db @ D.T
            return -np.column_stack([ds_da[:, 0] + ds_db[:, 2], ds_da[:, 2] + ds_db[:, 1]])

        return f

    return displacement, gradient, body_force


def poly2d_case(nu: float = 1.0 / 3.0, model: Model = Model.PLANE_STRAIN, young_modulus: float = 1.0) -> BenchmarkCase:
    """Unit square, traction on ``x2 = 0`` and zero displacement elsewhere."""
    mat = Material(young_modulus, nu, Model(model))
    disp, grad, body = poly2d_fields()
    case = BenchmarkCase(
        name="poly2d",
        material=mat,
        rules=[
            BoundaryRule("bottom", Tag.NEUMANN, on_plane(1, 0.0)),
            BoundaryRule("clamped", Tag.DIRICHLET, lambda x, n: ~on_plane(1, 0.0)(x, n)),
        ],
        loads=Loads(),
        make_mesh=_structured_2d,
        exact_displacement=disp,
        exact_gradient=grad,
        params={"nu": nu},
    )
    case.loads = Loads(body_force=body(elasticity_matrix(mat)), dirichlet=disp, traction=case.exact_traction)
    return case


def _maybe_distort(mesh, seed):
    return mesh if seed is None else meshmod.distort_mesh(mesh, seed)


def _structured_2d(level, kind="quad", seed=None):
    return _maybe_distort(meshmod.generate_structured_2d(level, kind), seed)


# --------------------------------------------------------------------------
# Kirsch plate


def kolosov_constant(material: Material) -> float:
    nu = material.poisson_ratio
    if material.model is Model.PLANE_STRESS:
        return (3.0 - nu) / (1.0 + nu)
    if material.model is Model.PLANE_STRAIN:
        return 3.0 - 4.0 * nu
    raise ValueError("Kolosov constant is defined for plane models only")


def kirsch_fields(material: Material, sigma0: float, a: float):
    """Displacement and gradient of the infinite plate with a circular hole.

    Each component is a sum of terms ``c r^m trig(n theta)``.
    """
    k = kolosov_constant(material)
    c = sigma0 * a / (8.0 * material.shear_modulus)
    terms = [
        [((k + 1) / a, 1, 1), (2 * (k + 1) * a, -1, 1), (2 * a, -1, 3), (-2 * a**3, -3, 3)],  # cos
        [((k - 3) / a, 1, 1), (-2 * (k - 1) * a, -1, 1), (2 * a, -1, 3), (-2 * a**3, -3, 3)],  # sin
    ]

    def polar(X):
        r = np.hypot(X[:, 0], X[:, 1])
        if np.any(r < a * (1 - 1e-9)):
            raise ValueError("Kirsch solution evaluated inside the hole")
        return r, np.arctan2(X[:, 1], X[:, 0])

    def displacement(X):
        r, th = polar(X)
        u1 = sum(cf * r**m * np.cos(n * th) for cf, m, n in terms[0])
        u2 = sum(cf * r**m * np.sin(n * th) for cf, m, n in terms[1])
        return c * np.column_stack([u1, u2])

    def gradient(X):
        r, th = polar(X)
        cs, sn = np.cos(th), np.sin(th)
        g = np.empty((len(X), 2, 2))
        for i, (trig, dtrig) in enumerate(((np.cos, lambda t: -np.sin(t)), (np.sin, np.cos))):
            ur = sum(cf * m * r ** (m - 1) * trig(n * th) for cf, m, n in terms[i])
            ut = sum(cf * n * r**m * dtrig(n * th) for cf, m, n in terms[i])
            g[:, i, 0] = c * (ur * cs - ut * sn / r)
            g[:, i, 1] = c * (ur * sn + ut * cs / r)
        return g

    return displacement, gradient


def kirsch_polar_stress(X, sigma0=10.0, a=1.0):
    """Classical closed-form stresses ``(s_rr, s_tt, s_rt)``."""
    r = np.hypot(X[:, 0], X[:, 1])
    th = np.arctan2(X[:, 1], X[:, 0])
    q2, q4 = (a / r) ** 2, (a / r) ** 4
    srr = 0.5 * sigma0 * (1 - q2) + 0.5 * sigma0 * (1 - 4 * q2 + 3 * q4) * np.cos(2 * th)
    stt = 0.5 * sigma0 * (1 + q2) - 0.5 * sigma0 * (1 + 3 * q4) * np.cos(2 * th)
    srt = -0.5 * sigma0 * (1 + 2 * q2 - 3 * q4) * np.sin(2 * th)
    return np.column_stack([srr, stt, srt])


def hoop_stress(X, stress_voigt):
    th = np.arctan2(X[:, 1], X[:, 0])
    c, s = np.cos(th), np.sin(th)
    return stress_voigt[:, 0] * s**2 + stress_voigt[:, 1] * c**2 - 2 * stress_voigt[:, 2] * s * c


def kirsch_case(model: Model = Model.PLANE_STRESS, half_width=4.0, radius=1.0, young_modulus=1e5, nu=0.3, sigma0=10.0) -> BenchmarkCase:
    """Quarter plate ``[0, L]^2`` minus the disc of radius ``a``.

    Symmetry on the axes, zero traction on the hole and exact traction on
    the outer sides. Meshes come from files (see :func:`fcfv.mesh.read_mesh`).
    """
    mat = Material(young_modulus, nu, Model(model))
    disp, grad = kirsch_fields(mat, sigma0, radius)
    # chord midpoints of the faceted hole lie on or inside the circle
    near_hole = lambda x, n: np.hypot(x[:, 0], x[:, 1]) <= radius * (1.0 + 1e-9)
    case = BenchmarkCase(
        name="kirsch",
        material=mat,
        rules=[
            BoundaryRule("bottom", Tag.SYMMETRY, on_plane(1, 0.0)),
            BoundaryRule("left", Tag.SYMMETRY, on_plane(0, 0.0)),
            BoundaryRule("hole", Tag.NEUMANN, near_hole),
            BoundaryRule("outer", Tag.NEUMANN, everywhere),
        ],
        loads=Loads(),
        make_mesh=kirsch_fixture,
        kinds=("tri",),
        exact_displacement=disp,
        exact_gradient=grad,
        scalar=lambda mesh, result: ("hoop_stress_at_hole", hoop_stress_at_hole(mesh, result.solution.stress, radius)),
        reference={"hoop_stress_at_hole": 3.0 * sigma0},
        params={"L": half_width, "a": radius, "sigma0": sigma0},
        length_scale=float(np.sqrt(2.0) * half_width),
    )
    case.loads = Loads(dirichlet=None, traction={"outer": case.exact_traction, "hole": lambda x, n: np.zeros_like(x)})
    return case


KIRSCH_LEVELS = (1, 2, 3)


def kirsch_fixture(level: int, kind: str = "tri", seed=None) -> Mesh:
    """Shipped unstructured triangulation number ``level`` (1..3), graded
    towards the hole; each level halves the size field."""
    if level not in KIRSCH_LEVELS:
        raise ValueError(f"Kirsch fixtures exist for levels {KIRSCH_LEVELS}, not {level}")
    ref = resources.files("fcfv") / "data" / f"kirsch_{level}.mesh"
    with resources.as_file(ref) as path:
        mesh = meshmod.read_mesh(path)
    return _maybe_distort(mesh, seed)


def hoop_stress_at_hole(mesh: Mesh, stress: np.ndarray, radius: float = 1.0) -> float:
    """Hoop stress in the cell touching the hole closest to ``theta = 90 deg``."""
    r = np.hypot(mesh.face_centers[:, 0], mesh.face_centers[:, 1])
    bnd = mesh.boundary_faces
    hole = bnd[r[bnd] < radius * 1.05]
    if hole.size == 0:
        raise ValueError("no hole faces found")
    th = np.arctan2(mesh.face_centers[hole, 1], mesh.face_centers[hole, 0])
    f = hole[np.argmax(th)]
    e = mesh.face_elems[f, 0]
    return float(hoop_stress(mesh.centroids[[e]], stress[[e]])[0])


# --------------------------------------------------------------------------
# Cook's membrane

COOK_CORNERS = np.array([[0.0, 0.0], [48.0, 44.0], [48.0, 60.0], [0.0, 44.0]])
COOK_TIP = np.array([48.0, 52.0])


def cook_map(st: np.ndarray) -> np.ndarray:
    s, t = st[:, 0], st[:, 1]
    P = COOK_CORNERS
    x = ((1 - s) * (1 - t))[:, None] * P[0] + (s * (1 - t))[:, None] * P[1] + (s * t)[:, None] * P[2] + ((1 - s) * t)[:, None] * P[3]
    return x


def cook_mesh(level: int, kind: str = "quad") -> Mesh:
    """``2**level x 2**level`` cells mapped bilinearly onto the trapezoid."""
    n = 2**level
    return meshmod.map_mesh(meshmod.grid_2d(n, n, kind), cook_map)


def cook_case(which: str = "compressible") -> BenchmarkCase:
    """Tapered panel clamped at ``x1 = 0`` with shear ``g = (0, 1/16)`` at
    ``x1 = 48``; plane strain."""
    if which == "compressible":
        mat, ref = Material(1.0, 1.0 / 3.0, Model.PLANE_STRAIN), 21.520
    elif which == "nearly_incompressible":
        mat, ref = Material(1.12499998125, 0.499999975, Model.PLANE_STRAIN), 16.442
    else:
        raise ValueError("which must be 'compressible' or 'nearly_incompressible'")
    shear = lambda x, n: np.tile([0.0, 1.0 / 16.0], (len(x), 1))
    return BenchmarkCase(
        name=f"cook-{which}",
        material=mat,
        rules=[
            BoundaryRule("clamped", Tag.DIRICHLET, on_plane(0, 0.0)),
            BoundaryRule("load", Tag.NEUMANN, on_plane(0, 48.0)),
            BoundaryRule("free", Tag.NEUMANN, everywhere),
        ],
        loads=Loads(dirichlet=None, traction={"load": shear}),
        make_mesh=lambda level, kind="quad", seed=None: _maybe_distort(cook_mesh(level, kind), seed),
        scalar=lambda mesh, result: ("tip_displacement", tip_displacement(mesh, result.uhat)),
        reference={"tip_displacement": ref},
        params={"which": which},
        length_scale=float(np.hypot(48.0, 60.0)),
    )


def tip_displacement(mesh: Mesh, uhat_face: np.ndarray, point=COOK_TIP) -> float:
    """Vertical displacement at ``point``: mean of the hybrid values on the
    boundary faces touching it."""
    bnd = mesh.boundary_faces
    node = np.argmin(np.linalg.norm(mesh.nodes - point, axis=1))
    touching = bnd[np.any(mesh.faces[bnd] == node, axis=1)]
    return float(uhat_face[touching, 1].mean())


# --------------------------------------------------------------------------
# cantilever beam under end shear


def beam3d_fields(material: Material, P: float, n_series: int = 30):
    """Displacement and gradient of the end-loaded prismatic beam on
    ``[-1, 1]^2 x [0, L]``; the series runs over ``n = 1..n_series``."""
    E, nu = material.young_modulus, material.poisson_ratio
    n = np.arange(1, n_series + 1)
    coef = (-1.0) ** n / (n**3 * np.cosh(n * np.pi))
    cs = -3.0 * P * nu / (np.pi**3 * E)

    def series(a, b):
        # w = sum coef cos(n pi a) sinh(n pi b), plus its partial derivatives
        A = np.pi * np.outer(a, n)
        B = np.pi * np.outer(b, n)
        # sinh(n pi b)/cosh(n pi) written to avoid overflow
        sh = (np.exp(B - np.pi * n) - np.exp(-B - np.pi * n)) / (1.0 + np.exp(-2 * np.pi * n))
        ch = (np.exp(B - np.pi * n) + np.exp(-B - np.pi * n)) / (1.0 + np.exp(-2 * np.pi * n))
        c = (-1.0) ** n / n**3
        w = (np.cos(A) * sh) @ c
        wa = (-np.pi * n * np.sin(A) * sh) @ c
        wb = (np.pi * n * np.cos(A) * ch) @ c
        return w, wa, wb

    def displacement(X):
        x, y, z = X[:, 0], X[:, 1], X[:, 2]
        w, _, _ = series(x, y)
        u1 = -3 * P * nu / (4 * E) * x * y * z
        u2 = P / (8 * E) * (3 * nu * z * (x**2 - y**2) - z**3)
        u3 = P * y / (8 * E) * (nu * (3 * x**2 - y**2 + 4) + 3 * z**2 - 2 * y**2 + 6) + cs * w
        return np.column_stack([u1, u2, u3])

    def gradient(X):
        x, y, z = X[:, 0], X[:, 1], X[:, 2]
        _, wx, wy = series(x, y)
        k = P / (8 * E)
        g = np.empty((len(X), 3, 3))
        g[:, 0, 0] = -3 * P * nu / (4 * E) * y * z
        g[:, 0, 1] = -3 * P * nu / (4 * E) * x * z
        g[:, 0, 2] = -3 * P * nu / (4 * E) * x * y
        g[:, 1, 0] = k * 6 * nu * z * x
        g[:, 1, 1] = -k * 6 * nu * z * y
        g[:, 1, 2] = k * (3 * nu * (x**2 - y**2) - 3 * z**2)
        g[:, 2, 0] = k * y * 6 * nu * x + cs * wx
        g[:, 2, 1] = k * (nu * (3 * x**2 - 3 * y**2 + 4) + 3 * z**2 - 6 * y**2 + 6) + cs * wy
        g[:, 2, 2] = k * y * 6 * z
        return g

    return displacement, gradient, coef


def beam3d_case(n_series: int = 30, length: float = 10.0, young_modulus: float = 25.0, nu: float = 0.3, P: float = 0.1) -> BenchmarkCase:
    """Exact displacement on ``x3 = L``, exact traction on the other faces."""
    mat = Material(young_modulus, nu, Model.THREE_D)
    disp, grad, _ = beam3d_fields(mat, P, n_series)
    box = ((-1.0, -1.0, 0.0), (1.0, 1.0, length))
    case = BenchmarkCase(
        name="beam3d",
        material=mat,
        rules=[
            BoundaryRule("end", Tag.DIRICHLET, on_plane(2, length)),
            BoundaryRule("sides", Tag.NEUMANN, everywhere),
        ],
        loads=Loads(),
        make_mesh=lambda level, kind="hex", seed=None: _maybe_distort(meshmod.generate_structured_3d(level, kind, box), seed),
        kinds=("hex", "tet"),
        exact_displacement=disp,
        exact_gradient=grad,
        params={"L": length, "P": P, "n_series": n_series},
        length_scale=float(np.sqrt(8.0 + length**2)),
    )
    case.loads = Loads(dirichlet=disp, traction=case.exact_traction)
    return case


# --------------------------------------------------------------------------
# thin cylindrical shell with fixed ends under pressure


def shell_constants(E, nu, a, t, L, rigidity_exponent=3):
    """``(beta, alpha, C1, C2)`` of the boundary-layer solution."""
    D = E * t**3 / (12.0 * (1.0 - nu**rigidity_exponent))
    beta = (E * t / (4.0 * a**2 * D)) ** 0.25
    alpha = beta * L / 2.0
    den = np.cos(2 * alpha) + np.cosh(2 * alpha)
    C1 = 2 * np.sin(alpha) * np.sinh(alpha) / den
    C2 = 2 * np.cos(alpha) * np.cosh(alpha) / den
    return beta, alpha, C1, C2


def shell_fields(E, nu, a, t, L, P, rigidity_exponent=3):
    beta, alpha, C1, C2 = shell_constants(E, nu, a, t, L, rigidity_exponent)
    amp = -P * a**2 / (E * t)

    def radial(z):
        bz = beta * z
        # C * sinh/cosh products expanded to stay finite for large alpha
        e1 = np.exp(np.abs(bz) - alpha)
        e2 = np.exp(-np.abs(bz) - alpha)
        k = np.exp(alpha) / (np.cos(2 * alpha) + np.cosh(2 * alpha))
        sh = 0.5 * np.sign(bz) * (e1 - e2)
        ch = 0.5 * (e1 + e2)
        c1 = 2 * np.sin(alpha) * np.sinh(alpha) * k
        c2 = 2 * np.cos(alpha) * np.cosh(alpha) * k
        return amp * (1 - c1 * np.sin(bz) * sh - c2 * np.cos(bz) * ch)

    def radial_derivative(z):
        bz = beta * z
        e1 = np.exp(np.abs(bz) - alpha)
        e2 = np.exp(-np.abs(bz) - alpha)
        k = np.exp(alpha) / (np.cos(2 * alpha) + np.cosh(2 * alpha))
        sh = 0.5 * np.sign(bz) * (e1 - e2)
        ch = 0.5 * (e1 + e2)
        c1 = 2 * np.sin(alpha) * np.sinh(alpha) * k
        c2 = 2 * np.cos(alpha) * np.cosh(alpha) * k
        d = c1 * (np.cos(bz) * sh + np.sin(bz) * ch) + c2 * (-np.sin(bz) * ch + np.cos(bz) * sh)
        return -amp * beta * d

    def displacement(X):
        r = np.hypot(X[:, 0], X[:, 1])
        ur = radial(X[:, 2])
        return np.column_stack([ur * X[:, 0] / r, ur * X[:, 1] / r, np.zeros(len(X))])

    def gradient(X):
        x, y = X[:, 0], X[:, 1]
        r2 = x**2 + y**2
        r = np.sqrt(r2)
        ur = radial(X[:, 2])
        dur = radial_derivative(X[:, 2])
        g = np.zeros((len(X), 3, 3))
        g[:, 0, 0] = ur * y**2 / r**3
        g[:, 0, 1] = -ur * x * y / r**3
        g[:, 1, 0] = -ur * x * y / r**3
        g[:, 1, 1] = ur * x**2 / r**3
        g[:, 0, 2] = dur * x / r
        g[:, 1, 2] = dur * y / r
        return g

    return displacement, gradient, radial, (beta, alpha, C1, C2)


SHELL_TABLE = {
    1: {"mesh": (80, 10, 2), "E_u": 0.0055, "E_sigma": 0.0764, "E_r": 0.0285},
    2: {"mesh": (160, 20, 2), "E_u": 0.0035, "E_sigma": 0.0409, "E_r": 0.0191},
    3: {"mesh": (320, 40, 2), "E_u": 0.0021, "E_sigma": 0.0224, "E_r": 0.0124},
}


def shell_dims(level) -> tuple[int, int, int]:
    """Cell counts (circumferential, axial, through-thickness) for a reference
    level 1..3, or an explicit triple passed through unchanged."""
    if isinstance(level, (tuple, list)):
        if len(level) != 3:
            raise ValueError(f"shell mesh dimensions need three counts, got {level!r}")
        return tuple(int(v) for v in level)
    if level not in SHELL_TABLE:
        raise ValueError(f"shell levels are {sorted(SHELL_TABLE)} or explicit (n_theta, n_z, n_t), not {level!r}")
    return SHELL_TABLE[level]["mesh"]


def shell_case(
    pressure: float = 1e-4,
    rigidity_exponent: int = 3,
    stretch: float = 20.0,
    length: float = 5.0,
    radius: float = 1.0,
    thickness: float = 0.02,
    young_modulus: float = 1.0,
    nu: float = 0.3,
) -> BenchmarkCase:
    """Closed cylinder, clamped at ``x3 = +/- L/2``, loaded on the inner wall.

    The inner wall carries the traction ``pressure * n`` (n the outward
    normal of the solid), which reproduces the sign of the closed-form
    radial displacement. ``rigidity_exponent`` selects ``1 - nu**3`` (3) or
    ``1 - nu**2`` (2) in the flexural rigidity.
    """
    mat = Material(young_modulus, nu, Model.THREE_D)
    disp, grad, radial, consts = shell_fields(young_modulus, nu, radius, thickness, length, pressure, rigidity_exponent)
    # inner wall: outward normal points towards the axis
    inner = lambda x, n: n[:, 0] * x[:, 0] + n[:, 1] * x[:, 1] < -0.5 * np.hypot(x[:, 0], x[:, 1])
    half = length / 2.0
    case = BenchmarkCase(
        name="shell",
        material=mat,
        rules=[
            BoundaryRule("ends", Tag.DIRICHLET, lambda x, n: np.abs(np.abs(x[:, 2]) - half) <= 1e-9 * half),
            BoundaryRule("inner", Tag.NEUMANN, inner),
            BoundaryRule("outer", Tag.NEUMANN, everywhere),
        ],
        loads=Loads(traction={"inner": lambda x, n: pressure * n}),
        make_mesh=lambda level, kind="hex", seed=None: _maybe_distort(
            meshmod.generate_shell_mesh(*shell_dims(level), stretch, radius, thickness, length), seed
        ),
        kinds=("hex",),
        radial=radial,
        exact_displacement=disp,
        exact_gradient=grad,
        reference={"table": SHELL_TABLE},
        params={
            "pressure": pressure, "rigidity_exponent": rigidity_exponent, "stretch": stretch,
            "L": length, "a": radius, "t": thickness,
            "beta": consts[0], "alpha": consts[1], "C1": consts[2], "C2": consts[3],
        },
    )
    return case


REGISTRY: dict[str, Callable[..., BenchmarkCase]] = {
    "poly2d": poly2d_case,
    "kirsch": kirsch_case,
    "cook": cook_case,
    "beam3d": beam3d_case,
    "shell": shell_case,
}


def get_case(name: str, **kwargs) -> BenchmarkCase:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown case {name!r}; available: {', '.join(sorted(REGISTRY))}") from None
    return factory(**kwargs)

"""Mesh generators: icosphere, revolution spheroid, randomly perturbed sphere."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import sph_harm_y

from ..errors import DomainError, GridTooCoarse, LevelTooLarge, ValidationFailed
from .core import TriangleMesh, build_mesh

MAX_LEVEL = 8

_PHI = (1.0 + np.sqrt(5.0)) / 2.0
_ICOSAHEDRON_VERTICES = np.array([
    [-1.0, _PHI, 0.0], [1.0, _PHI, 0.0], [-1.0, -_PHI, 0.0], [1.0, -_PHI, 0.0],
    [0.0, -1.0, _PHI], [0.0, 1.0, _PHI], [0.0, -1.0, -_PHI], [0.0, 1.0, -_PHI],
    [_PHI, 0.0, -1.0], [_PHI, 0.0, 1.0], [-_PHI, 0.0, -1.0], [-_PHI, 0.0, 1.0],
])
_ICOSAHEDRON_FACES = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
])

_CUBE_VERTICES = np.array([
    [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
    [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
], dtype=float)
_CUBE_FACES = np.array([
    [0, 2, 1], [0, 3, 2],  # z = 0
    [4, 5, 6], [4, 6, 7],  # z = 1
    [0, 1, 5], [0, 5, 4],  # y = 0
    [2, 3, 7], [2, 7, 6],  # y = 1
    [1, 2, 6], [1, 6, 5],  # x = 1
    [0, 4, 7], [0, 7, 3],  # x = 0
])


def icosahedron() -> TriangleMesh:
    """Regular icosahedron inscribed in the unit sphere."""
    v = _ICOSAHEDRON_VERTICES / np.linalg.norm(_ICOSAHEDRON_VERTICES, axis=1, keepdims=True)
    return build_mesh(v, _ICOSAHEDRON_FACES)


def unit_cube() -> TriangleMesh:
    """The cube [0, 1]^3 split into 12 triangles."""
    return build_mesh(_CUBE_VERTICES, _CUBE_FACES)


def _subdivide(vertices, faces):
    f = faces
    e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    e.sort(axis=1)
    uniq, inverse = np.unique(e, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    mid = 0.5 * (vertices[uniq[:, 0]] + vertices[uniq[:, 1]])
    mid /= np.linalg.norm(mid, axis=1, keepdims=True)
    n_f = len(f)
    m01 = len(vertices) + inverse[:n_f]
    m12 = len(vertices) + inverse[n_f:2 * n_f]
    m20 = len(vertices) + inverse[2 * n_f:]
    a, b, c = f[:, 0], f[:, 1], f[:, 2]
    new_faces = np.concatenate([
        np.stack([a, m01, m20], axis=1),
        np.stack([b, m12, m01], axis=1),
        np.stack([c, m20, m12], axis=1),
        np.stack([m01, m12, m20], axis=1),
    ])
    return np.concatenate([vertices, mid]), new_faces


def icosphere(level: int) -> TriangleMesh:
    """Icosahedron refined ``level`` times by 4-to-1 splits, on the unit sphere.

    The result has ``10 * 4**level + 2`` vertices.
    """
    level = int(level)
    if level < 0:
        raise ValueError("level must be >= 0")
    if level > MAX_LEVEL:
        raise LevelTooLarge(f"level {level} exceeds the memory guard {MAX_LEVEL}")
    v = _ICOSAHEDRON_VERTICES / np.linalg.norm(_ICOSAHEDRON_VERTICES, axis=1, keepdims=True)
    f = _ICOSAHEDRON_FACES.copy()
    for _ in range(level):
        v, f = _subdivide(v, f)
    return build_mesh(v, f)


def spheroid_mesh(r: float, nu: int, nv: int) -> TriangleMesh:
    """Revolution mesh of ``(x cos phi, x sin phi, r sqrt(1 - x**2))``.

    ``nu`` is the number of azimuthal segments and ``nv`` the number of
    latitude bands. Rings sit at ``x = sin(theta)`` for a uniform polar
    angle grid ``theta_k = k * pi / nv``; both poles are closed with
    triangle fans.
    """
    if not r > 0:
        raise DomainError(f"aspect r must be positive, got {r}")
    nu, nv = int(nu), int(nv)
    if nu < 8 or nv < 8:
        raise GridTooCoarse(f"need nu >= 8 and nv >= 8, got nu={nu}, nv={nv}")
    theta = np.pi * np.arange(1, nv) / nv
    phi = 2.0 * np.pi * np.arange(nu) / nu
    x = np.sin(theta)[:, None]
    ring = np.stack([
        x * np.cos(phi)[None, :],
        x * np.sin(phi)[None, :],
        np.broadcast_to(r * np.cos(theta)[:, None], (nv - 1, nu)),
    ], axis=-1).reshape(-1, 3)
    vertices = np.concatenate([[[0.0, 0.0, r]], ring, [[0.0, 0.0, -r]]])
    south = len(vertices) - 1

    j = np.arange(nu)
    jn = (j + 1) % nu
    faces = [np.stack([np.zeros(nu, dtype=np.int64), 1 + j, 1 + jn], axis=1)]
    for k in range(nv - 2):
        a = 1 + k * nu + j
        b = 1 + k * nu + jn
        c = 1 + (k + 1) * nu + jn
        d = 1 + (k + 1) * nu + j
        faces.append(np.stack([a, d, c], axis=1))
        faces.append(np.stack([a, c, b], axis=1))
    last = 1 + (nv - 2) * nu
    faces.append(np.stack([np.full(nu, south), last + jn, last + j], axis=1))
    return build_mesh(vertices, np.concatenate(faces))


def _real_sph_harm(l, m, polar, azimuth):
    if m == 0:
        return sph_harm_y(l, 0, polar, azimuth).real
    y = sph_harm_y(l, abs(m), polar, azimuth)
    return np.sqrt(2.0) * (y.real if m > 0 else y.imag)


def radial_field(directions: np.ndarray, lmax: int, seed: int) -> np.ndarray:
    """Random real spherical-harmonic expansion evaluated at unit vectors.

    Degrees ``2..lmax`` (degree 0 is a dilation, degree 1 a translation
    to first order) with standard normal coefficients damped by
    ``degree**-2``. Normalised to unit root-mean-square over the sphere.
    Returns zeros when ``lmax < 2``.
    """
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    polar = np.arccos(np.clip(directions[:, 2], -1.0, 1.0))
    azimuth = np.arctan2(directions[:, 1], directions[:, 0])
    field = np.zeros(len(directions))
    norm2 = 0.0
    for l in range(2, lmax + 1):
        coef = rng.standard_normal(2 * l + 1) / l**2
        norm2 += float(coef @ coef)
        for c, m in zip(coef, range(-l, l + 1)):
            field += c * _real_sph_harm(l, m, polar, azimuth)
    if norm2 == 0.0:
        return field
    # orthonormal harmonics: mean square over the sphere is norm2 / (4 pi)
    return field * np.sqrt(4.0 * np.pi / norm2)


def bumpy_sphere(lmax: int, amp: float, seed: int, level: int) -> TriangleMesh:
    """Icosphere with radius ``1 + amp * S(x)``, ``S`` from :func:`radial_field`.

    ``amp`` is the root-mean-square relative radial displacement.
    Deterministic in ``(lmax, amp, seed, level)``.
    """
    if amp < 0:
        raise ValueError("amp must be >= 0")
    base = icosphere(level)
    if amp == 0 or lmax < 2:
        return base
    radius = 1.0 + amp * radial_field(base.vertices, lmax, seed)
    if radius.min() <= 0:
        raise ValidationFailed(f"amplitude {amp} drives the radius to {radius.min():.3g} <= 0")
    return base.with_vertices(base.vertices * radius[:, None])


@dataclass(frozen=True)
class ShapeSpec:
    """Generator parameters for one of the three mesh families."""

    kind: str = "icosphere"
    level: int = 3
    r: float = 1.0
    nu: int = 64
    nv: int = 64
    lmax: int = 4
    amp: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("icosphere", "spheroid", "bumpy-sphere"):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.nu < 8 or self.nv < 8:
            raise ValueError("nu and nv must be >= 8")
        if self.lmax < 0:
            raise ValueError("lmax must be >= 0")
        if self.amp < 0:
            raise ValueError("amp must be >= 0")

    def build(self) -> TriangleMesh:
        if self.kind == "icosphere":
            return icosphere(self.level)
        if self.kind == "spheroid":
            return spheroid_mesh(self.r, self.nu, self.nv)
        return bumpy_sphere(self.lmax, self.amp, self.seed, self.level)

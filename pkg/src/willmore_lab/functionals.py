"""Global functionals of closed meshes and their deficits from the round sphere."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .constants import SPHERE_ISOPERIMETRIC, SPHERE_WILLMORE, UNIT_BALL_VOLUME
from .curvature import CurvatureField, curvature_field
from .mesh import TriangleMesh, euler_characteristic


def surface_area(mesh: TriangleMesh) -> float:
    return float(mesh.face_areas.sum())


def enclosed_volume(mesh: TriangleMesh) -> float:
    """Divergence-theorem volume ``1/6 sum det[a, b, c]`` over outward faces."""
    return mesh.signed_volume


def willmore_energy(mesh: TriangleMesh, field: CurvatureField | None = None) -> float:
    """``1/4 sum_i H_i^2 A_i`` with cotangent ``H`` and mixed areas ``A``."""
    c = curvature_field(mesh) if field is None else field
    return float(0.25 * np.sum(c.mean_curvature**2 * c.mixed_area))


def isoperimetric_ratio(mesh: TriangleMesh) -> float:
    return surface_area(mesh) / enclosed_volume(mesh) ** (2.0 / 3.0)


def tracefree_energy(mesh: TriangleMesh, field: CurvatureField | None = None) -> float:
    """``1/4 sum_i (H_i^2 - 4 K_i) A_i``.

    Pointwise negative values are kept. Because the angle defects sum to
    exactly ``4 pi`` on a sphere-type mesh, this equals the Willmore
    deficit up to rounding.
    """
    c = curvature_field(mesh) if field is None else field
    return float(0.25 * np.sum((c.mean_curvature**2 - 4.0 * c.gauss_curvature) * c.mixed_area))


def position_weighted_mean_curvature(mesh: TriangleMesh, field: CurvatureField | None = None):
    """Discrete ``int x . H dA`` and its residual against ``-2 * area``.

    ``H`` here is the first-variation mean-curvature vector (``Delta x``,
    inward on convex surfaces), the negative of
    :func:`~willmore_lab.curvature.mean_curvature_vectors`.

    Returns
    -------
    value : float
    residual : float
        ``|value + 2 * area| / area``.
    """
    c = curvature_field(mesh) if field is None else field
    value = -float(np.sum(np.einsum("ij,ij->i", mesh.vertices, c.mean_curvature_vector) * c.mixed_area))
    area = surface_area(mesh)
    return value, abs(value + 2.0 * area) / area


@dataclass(frozen=True)
class FunctionalReport:
    area: float
    volume: float
    willmore: float
    isoperimetric_ratio: float
    willmore_deficit: float
    isoperimetric_deficit: float
    tracefree_energy: float
    gauss_bonnet_residual: float
    tangential_identity_residual: float
    euler_characteristic: int
    mesh_vertices: int
    mesh_faces: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def compute_report(mesh: TriangleMesh) -> FunctionalReport:
    c = curvature_field(mesh)
    area = surface_area(mesh)
    volume = enclosed_volume(mesh)
    w = willmore_energy(mesh, c)
    ratio = area / volume ** (2.0 / 3.0)
    _, tangential = position_weighted_mean_curvature(mesh, c)
    return FunctionalReport(
        area=area,
        volume=volume,
        willmore=w,
        isoperimetric_ratio=ratio,
        willmore_deficit=w - SPHERE_WILLMORE,
        isoperimetric_deficit=ratio - SPHERE_ISOPERIMETRIC,
        tracefree_energy=tracefree_energy(mesh, c),
        gauss_bonnet_residual=abs(float(c.angle_defect.sum()) - 4.0 * math.pi),
        tangential_identity_residual=tangential,
        euler_characteristic=euler_characteristic(mesh),
        mesh_vertices=mesh.n_vertices,
        mesh_faces=mesh.n_faces,
    )


def verify_volume_deficit(mesh: TriangleMesh) -> tuple[float, float]:
    """Rescale to area ``4 pi``; return ``(4 pi / 3 - volume, W - 4 pi)``.

    The first component is non-negative by the isoperimetric inequality.
    """
    scale = math.sqrt(SPHERE_WILLMORE / surface_area(mesh))
    volume = enclosed_volume(mesh) * scale**3
    return UNIT_BALL_VOLUME - volume, willmore_energy(mesh) - SPHERE_WILLMORE

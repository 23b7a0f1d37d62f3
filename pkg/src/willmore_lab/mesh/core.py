"""Closed, oriented, genus-0 triangle meshes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import (
    DegenerateFace,
    InwardOrientation,
    NonManifold,
    ValidationFailed,
    WrongGenus,
)

# face area must exceed this fraction of the squared bounding-box diagonal
DEGENERACY_FACTOR = 1e-12


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """Indexed triangle mesh with outward (counterclockwise) faces.

    Instances are immutable: both arrays are made read-only on
    construction. Use :func:`build_mesh` to obtain a validated mesh;
    calling the constructor directly skips validation.

    Attributes
    ----------
    vertices : ndarray, shape (V, 3), float64
    faces : ndarray, shape (F, 3), int64
    """

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64, copy=True)
        f = np.array(self.faces, dtype=np.int64, copy=True)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"vertices must have shape (V, 3), got {v.shape}")
        if f.ndim != 2 or f.shape[1] != 3:
            raise ValueError(f"faces must have shape (F, 3), got {f.shape}")
        v.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges as sorted index pairs, shape (E, 2)."""
        return _unique_edges(self.faces, self.n_vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def corners(self) -> np.ndarray:
        """Face corner positions, shape (F, 3, 3)."""
        return self.vertices[self.faces]

    @cached_property
    def face_area_vectors(self) -> np.ndarray:
        """Half the cross product of two edges: outward normal times area."""
        p = self.corners
        return 0.5 * np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])

    @cached_property
    def face_areas(self) -> np.ndarray:
        return np.linalg.norm(self.face_area_vectors, axis=1)

    @cached_property
    def signed_volume(self) -> float:
        p = self.corners
        return float(np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum() / 6.0)

    @cached_property
    def bbox_diagonal(self) -> float:
        return float(np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0)))

    @cached_property
    def vertex_neighbors(self) -> list[np.ndarray]:
        """Sorted one-ring vertex indices for every vertex."""
        e = self.edges
        both = np.concatenate([e, e[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        splits = np.searchsorted(both[:, 0], np.arange(1, self.n_vertices))
        return np.split(both[:, 1], splits)

    def with_vertices(self, vertices) -> "TriangleMesh":
        """Same connectivity, new positions; geometry is re-validated."""
        mesh = TriangleMesh(vertices, self.faces)
        validate_geometry(mesh)
        return mesh

    def transformed(self, scale: float = 1.0, shift=(0.0, 0.0, 0.0)) -> "TriangleMesh":
        """Apply ``x -> scale * x + shift``."""
        if scale <= 0:
            raise ValueError("scale must be positive")
        return TriangleMesh(scale * self.vertices + np.asarray(shift, dtype=float), self.faces)

    def __repr__(self):
        return f"TriangleMesh(V={self.n_vertices}, F={self.n_faces})"


def _directed_edges(faces):
    return np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])


def _unique_edges(faces, n_vertices):
    e = np.sort(_directed_edges(faces), axis=1)
    keys = np.unique(e[:, 0] * n_vertices + e[:, 1])
    return np.stack([keys // n_vertices, keys % n_vertices], axis=1)


def euler_characteristic(mesh) -> int:
    """Return V - E + F.

    Accepts any object with ``vertices`` and ``faces`` attributes so that
    meshes rejected by :func:`build_mesh` (for instance a torus) can still
    be inspected.
    """
    faces = np.asarray(mesh.faces, dtype=np.int64)
    n_v = len(mesh.vertices)
    return n_v - len(_unique_edges(faces, max(n_v, int(faces.max(initial=0)) + 1))) + len(faces)


def check_connectivity(faces: np.ndarray, n_vertices: int) -> None:
    """Raise unless every edge borders exactly two oppositely oriented faces."""
    if faces.size and (faces.min() < 0 or faces.max() >= n_vertices):
        raise ValidationFailed(f"face index out of range [0, {n_vertices})")
    if np.any((faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 2] == faces[:, 0])):
        raise DegenerateFace("face with a repeated vertex index")
    n = n_vertices
    directed = _directed_edges(faces)
    undirected = np.sort(directed, axis=1)
    keys, counts = np.unique(undirected[:, 0] * n + undirected[:, 1], return_counts=True)
    bad = np.flatnonzero(counts != 2)
    if bad.size:
        a, b = divmod(int(keys[bad[0]]), n)
        raise NonManifold(f"edge ({a}, {b}) has {counts[bad[0]]} incident faces, expected 2")
    # with exactly two faces per edge, consistent orientation means the
    # directed copies are all distinct
    dkeys, dcounts = np.unique(directed[:, 0] * n + directed[:, 1], return_counts=True)
    if len(dkeys) != len(directed):
        a, b = divmod(int(dkeys[np.argmax(dcounts)]), n)
        raise NonManifold(f"edge ({a}, {b}) is shared by two faces with the same orientation")


def validate_geometry(mesh: TriangleMesh) -> None:
    """Face-area and orientation checks; connectivity is assumed valid."""
    if not np.all(np.isfinite(mesh.vertices)):
        raise ValidationFailed("non-finite vertex coordinate")
    threshold = DEGENERACY_FACTOR * mesh.bbox_diagonal**2
    areas = mesh.face_areas
    if areas.size and areas.min() <= threshold:
        i = int(np.argmin(areas))
        raise DegenerateFace(f"face {i} has area {areas[i]:.3e} <= {threshold:.3e}")
    if not mesh.signed_volume > 0:
        raise InwardOrientation(
            f"signed enclosed volume {mesh.signed_volume:.6g} <= 0; faces must be "
            "counterclockwise seen from outside"
        )


def validate(mesh: TriangleMesh) -> None:
    check_connectivity(mesh.faces, mesh.n_vertices)
    chi = euler_characteristic(mesh)
    if chi != 2:
        raise WrongGenus(f"Euler characteristic is {chi}, expected 2 (sphere type)")
    validate_geometry(mesh)


def build_mesh(vertices, faces) -> TriangleMesh:
    """Construct and validate a closed, outward-oriented genus-0 mesh.

    Raises
    ------
    NonManifold
        An edge without exactly two incident faces, or two faces
        traversing a shared edge in the same direction.
    WrongGenus
        ``V - E + F != 2``.
    DegenerateFace
        A face with area at most ``1e-12 * bbox_diagonal**2``.
    InwardOrientation
        Non-positive signed volume. The mesh is never flipped.
    """
    mesh = TriangleMesh(vertices, faces)
    validate(mesh)
    return mesh

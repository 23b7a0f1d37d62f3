from .core import TriangleMesh, build_mesh, euler_characteristic, validate
from .fileio import load_mesh, save_mesh
from .shapes import ShapeSpec, bumpy_sphere, icosahedron, icosphere, spheroid_mesh, unit_cube

__all__ = [
    "ShapeSpec",
    "TriangleMesh",
    "build_mesh",
    "bumpy_sphere",
    "euler_characteristic",
    "icosahedron",
    "icosphere",
    "load_mesh",
    "save_mesh",
    "spheroid_mesh",
    "unit_cube",
    "validate",
]

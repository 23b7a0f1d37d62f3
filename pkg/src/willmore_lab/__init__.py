"""Discrete Willmore energy and isoperimetric ratio on sphere-type meshes."""
from .constants import SPHERE_ISOPERIMETRIC, SPHERE_WILLMORE, UNIT_BALL_VOLUME
from .curvature import (
    CurvatureField,
    curvature_field,
    dirichlet_energy_of_embedding,
    gauss_curvatures,
    mean_curvature_vectors,
    mixed_voronoi_areas,
)
from .functionals import (
    FunctionalReport,
    compute_report,
    enclosed_volume,
    isoperimetric_ratio,
    position_weighted_mean_curvature,
    surface_area,
    tracefree_energy,
    verify_volume_deficit,
    willmore_energy,
)
from .asymmetry import asymmetry_index
from .mesh import (
    ShapeSpec,
    TriangleMesh,
    build_mesh,
    bumpy_sphere,
    euler_characteristic,
    icosahedron,
    icosphere,
    load_mesh,
    save_mesh,
    spheroid_mesh,
    unit_cube,
)

__version__ = "0.1.0"

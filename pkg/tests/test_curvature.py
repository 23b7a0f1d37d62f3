import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from willmore_lab.curvature import (
    curvature_field,
    face_geometry,
    mixed_area_contributions,
    dirichlet_energy_of_embedding,
    gauss_curvatures,
    mean_curvature_vectors,
    mixed_voronoi_areas,
)
from willmore_lab.mesh import bumpy_sphere, icosahedron, icosphere, spheroid_mesh


def test_icosahedron_mixed_areas_equal():
    a = mixed_voronoi_areas(icosahedron())
    np.testing.assert_allclose(a, a[0], rtol=1e-13)


def test_mixed_areas_partition_area(corpus):
    for name, m in corpus:
        a = mixed_voronoi_areas(m)
        assert a.min() > 0, name
        assert abs(a.sum() - m.face_areas.sum()) <= 1e-10 * m.face_areas.sum(), name


def test_mixed_area_rule_per_triangle():
    equilateral = np.array([[[0, 0, 0], [1, 0, 0], [0.5, np.sqrt(3) / 2, 0]]], dtype=float)
    g = face_geometry(equilateral)
    np.testing.assert_allclose(mixed_area_contributions(g)[0], np.full(3, g.area[0] / 3), rtol=1e-12)
    obtuse = np.array([[[0, 0, 0], [2, 0, 0], [1, 0.3, 0]]], dtype=float)  # obtuse at corner 2
    g = face_geometry(obtuse)
    np.testing.assert_allclose(mixed_area_contributions(g)[0], g.area[0] * np.array([0.25, 0.25, 0.5]))
    right = np.array([[[0, 0, 0], [1, 0, 0], [0, 1, 0]]], dtype=float)
    g = face_geometry(right)
    # circumcentre on the hypotenuse: the right-angle corner gets half the area
    np.testing.assert_allclose(mixed_area_contributions(g)[0], [0.25, 0.125, 0.125], atol=1e-15)


def test_mixed_areas_positive_on_meshes_with_obtuse_faces():
    m = spheroid_mesh(0.3, 16, 16)
    g = face_geometry(m.corners)
    assert (g.cot < 0).any()
    a = mixed_voronoi_areas(m)
    assert a.min() > 0
    assert abs(a.sum() - m.face_areas.sum()) < 1e-12 * m.face_areas.sum()


def test_icosphere_mean_and_gauss_curvature_level4():
    c = curvature_field(icosphere(4))
    np.testing.assert_allclose(c.mean_curvature, 2.0, rtol=0.02)
    np.testing.assert_allclose(c.gauss_curvature, 1.0, rtol=0.02)


def test_mean_curvature_vector_points_outward_on_sphere():
    m = icosphere(3)
    hv = mean_curvature_vectors(m)
    assert np.all(np.einsum("ij,ij->i", hv, m.vertices) > 0)
    assert np.all(curvature_field(m).mean_curvature > 0)


def test_refinement_convergence_on_icosphere():
    h_err, k_err = [], []
    for level in range(2, 6):
        c = curvature_field(icosphere(level))
        h_err.append(np.abs(c.mean_curvature - 2.0).max())
        k_err.append(np.abs(c.gauss_curvature - 1.0).max())
    assert all(a > b for a, b in zip(h_err, h_err[1:]))
    assert all(a > b for a, b in zip(k_err, k_err[1:]))


def test_gauss_bonnet_exact(corpus):
    for name, m in corpus:
        c = curvature_field(m)
        assert abs(np.sum(c.gauss_curvature * c.mixed_area) - 4 * np.pi) <= 1e-9, name


@pytest.mark.parametrize("mesh", [icosahedron(), icosphere(5), spheroid_mesh(2.0, 64, 64)],
                         ids=["icosahedron", "icosphere5", "spheroid2"])
def test_dirichlet_energy_equals_area(mesh):
    area = mesh.face_areas.sum()
    tol = 1e-12 if mesh.n_vertices == 12 else 1e-10
    assert abs(dirichlet_energy_of_embedding(mesh) - area) <= tol * area


def test_gauss_curvature_scales_inverse_square():
    m = bumpy_sphere(3, 0.1, 5, 2)
    np.testing.assert_allclose(gauss_curvatures(m.transformed(3.0)), gauss_curvatures(m) / 9.0, rtol=1e-10)


@settings(max_examples=15, deadline=None)
@given(
    scale=st.floats(0.05, 50.0),
    shift=st.tuples(*[st.floats(-3.0, 3.0)] * 3),
    seed=st.integers(0, 2**32),
)
def test_scaling_and_translation_covariance(scale, shift, seed):
    m = bumpy_sphere(4, 0.1, seed, 2)
    base = curvature_field(m)
    moved = curvature_field(m.transformed(scale, shift))
    np.testing.assert_allclose(moved.mixed_area, base.mixed_area * scale**2, rtol=1e-9)
    np.testing.assert_allclose(moved.mean_curvature, base.mean_curvature / scale, rtol=1e-8, atol=1e-10 / scale)
    np.testing.assert_allclose(moved.mean_curvature_vector, base.mean_curvature_vector / scale,
                               rtol=1e-8, atol=1e-10 / scale)
    np.testing.assert_allclose(moved.gauss_curvature * scale**2, base.gauss_curvature, rtol=1e-8, atol=1e-9)


def test_translation_invariance_absolute():
    m = bumpy_sphere(4, 0.1, 1, 3)
    a = curvature_field(m)
    b = curvature_field(m.transformed(1.0, (0.3, -0.7, 0.2)))
    for name in ("mixed_area", "mean_curvature", "gauss_curvature", "mean_curvature_vector"):
        np.testing.assert_allclose(getattr(b, name), getattr(a, name), rtol=0, atol=1e-12)

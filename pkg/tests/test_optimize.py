import math

import numpy as np
import pytest

from willmore_lab.constants import SPHERE_ISOPERIMETRIC, SPHERE_WILLMORE
from willmore_lab.errors import MeshTooLarge
from willmore_lab.functionals import isoperimetric_ratio, surface_area, willmore_energy
from willmore_lab.mesh import bumpy_sphere, icosphere
from willmore_lab.mesh.core import TriangleMesh
from willmore_lab.optimize import (
    TRACE_COLUMNS,
    DescentConfig,
    area_gauge,
    minimize,
    objective,
    objective_gradient,
)

PENALTY = DescentConfig(sigma_target=5.2071, penalty_weight=10.0)

# final Willmore energy of the shared 300-step descent, recorded once from this implementation
DESCENT_FINAL_WILLMORE = 13.063861061636961


def global_fd_gradient(mesh, config):
    x = mesh.vertices
    grad = np.zeros_like(x)
    for i in range(x.shape[0]):
        for d in range(3):
            h = config.fd_epsilon * (1.0 + abs(x[i, d]))
            up, down = x.copy(), x.copy()
            up[i, d] += h
            down[i, d] -= h
            fp = objective(TriangleMesh(up, mesh.faces), config)
            fm = objective(TriangleMesh(down, mesh.faces), config)
            grad[i, d] = (fp - fm) / (2 * h)
    return grad


def test_objective_without_penalty_is_willmore():
    m = bumpy_sphere(3, 0.1, 5, 2)
    assert objective(m, DescentConfig()) == willmore_energy(m)


def test_objective_penalty_term():
    m = bumpy_sphere(3, 0.1, 5, 2)
    expected = willmore_energy(m) + 10.0 * (isoperimetric_ratio(m) - 5.2071) ** 2
    assert objective(m, PENALTY) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("config", [DescentConfig(), PENALTY], ids=["plain", "penalised"])
def test_local_gradient_matches_global(config):
    m = bumpy_sphere(3, 0.15, 9, 1)
    np.testing.assert_allclose(objective_gradient(m, config), global_fd_gradient(m, config), atol=1e-7)


def test_gradient_orthogonal_to_symmetries():
    m = icosphere(2)
    g = objective_gradient(m, DescentConfig())
    x = m.vertices
    scale = np.linalg.norm(g)
    assert abs(np.sum(g * x)) <= 1e-6 * scale * np.linalg.norm(x)
    assert np.all(np.abs(g.sum(axis=0)) <= 1e-6 * scale * math.sqrt(len(x)))


def test_gradient_second_order_in_step():
    m = icosphere(2)
    ref = objective_gradient(m, DescentConfig(fd_epsilon=1e-5))
    errs = [np.abs(objective_gradient(m, DescentConfig(fd_epsilon=e)) - ref).max() for e in (1e-2, 5e-3, 2.5e-3)]
    assert np.log2(errs[0] / errs[1]) >= 1.8
    assert np.log2(errs[1] / errs[2]) >= 1.8


def test_gradient_guard():
    with pytest.raises(MeshTooLarge):
        objective_gradient(icosphere(5), DescentConfig())


@pytest.mark.parametrize("kwargs", [
    {"max_steps": 0}, {"initial_step": 0.0}, {"armijo_c": 0.7}, {"backtrack_factor": 0.95},
    {"grad_tol": 0.0}, {"fd_epsilon": -1.0}, {"penalty_weight": -1.0}, {"penalty_weight": 1.0},
    {"sigma_target": 4.0, "penalty_weight": 1.0},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        DescentConfig(**kwargs)


def test_area_gauge():
    m = area_gauge(bumpy_sphere(3, 0.1, 1, 2).transformed(3.0))
    assert surface_area(m) == pytest.approx(4 * math.pi, rel=1e-14)


def test_sphere_start_is_stationary():
    final, trace = minimize(icosphere(3), DescentConfig(grad_tol=5e-3))
    assert trace.termination == "converged"
    assert len(trace.records) == 1
    assert willmore_energy(final) == pytest.approx(SPHERE_WILLMORE, rel=0.02)


def test_descent_is_scale_invariant():
    m = bumpy_sphere(4, 0.1, 3, 2)
    cfg = DescentConfig(max_steps=5)
    a, ta = minimize(m, cfg)
    b, tb = minimize(m.transformed(2.5), cfg)
    assert [r.willmore for r in ta.records] == pytest.approx([r.willmore for r in tb.records], rel=1e-10)
    np.testing.assert_allclose(a.vertices, b.vertices, atol=1e-8)


def test_penalty_pulls_ratio_towards_target():
    start = area_gauge(icosphere(2))
    final, trace = minimize(start, DescentConfig(max_steps=15, sigma_target=5.2071, penalty_weight=10.0))
    assert abs(isoperimetric_ratio(final) - 5.2071) < abs(isoperimetric_ratio(start) - 5.2071)
    objs = [r.objective for r in trace.records]
    assert all(b <= a for a, b in zip(objs, objs[1:]))


def test_trace_shape_and_csv():
    final, trace = minimize(bumpy_sphere(4, 0.1, 42, 2), DescentConfig(max_steps=4))
    assert trace.termination == "max_steps"
    assert [r.step for r in trace.records] == list(range(5))
    assert all(np.isfinite(r.grad_maxnorm) for r in trace.records)
    lines = trace.to_csv().splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert len(lines) == 6
    assert surface_area(final) == pytest.approx(4 * math.pi, rel=1e-12)


def test_descent_regression(descent_run):
    _, final, trace, _ = descent_run
    assert willmore_energy(final) == pytest.approx(DESCENT_FINAL_WILLMORE, rel=1e-8)
    assert trace.records[-1].willmore == pytest.approx(DESCENT_FINAL_WILLMORE, rel=1e-8)


def test_sphere_gradient_smaller_than_bumpy():
    g_sphere = np.abs(objective_gradient(icosphere(2), DescentConfig())).max()
    g_bumpy = np.abs(objective_gradient(bumpy_sphere(4, 0.1, 42, 2), DescentConfig())).max()
    assert g_sphere < g_bumpy


def test_penalty_at_sphere_target_is_small():
    m = icosphere(4)
    cfg = DescentConfig(sigma_target=SPHERE_ISOPERIMETRIC, penalty_weight=100.0)
    assert objective(m, cfg) == pytest.approx(willmore_energy(m), rel=1e-4)

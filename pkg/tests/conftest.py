import numpy as np
import pytest

from willmore_lab.mesh import bumpy_sphere, icosphere, spheroid_mesh, unit_cube
from willmore_lab.optimize import DescentConfig, minimize
from willmore_lab.verify import VerifyConfig, run_verify


def torus_arrays(n_major=12, n_minor=8, big=2.0, small=0.6):
    """Outward-oriented triangulated torus; chi = 0."""
    u = 2 * np.pi * np.arange(n_major) / n_major
    v = 2 * np.pi * np.arange(n_minor) / n_minor
    uu, vv = np.meshgrid(u, v, indexing="ij")
    verts = np.stack([
        (big + small * np.cos(vv)) * np.cos(uu),
        (big + small * np.cos(vv)) * np.sin(uu),
        small * np.sin(vv),
    ], axis=-1).reshape(-1, 3)
    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a = i * n_minor + j
            b = ((i + 1) % n_major) * n_minor + j
            c = ((i + 1) % n_major) * n_minor + (j + 1) % n_minor
            d = i * n_minor + (j + 1) % n_minor
            faces += [[a, b, c], [a, c, d]]
    return verts, np.array(faces)


def twenty_meshes():
    """The 20-mesh corpus used by the exact-identity acceptance checks."""
    meshes = [(f"icosphere-{k}", icosphere(k)) for k in range(6)]
    for r in (0.5, 1.0, 1.5, 2.0):
        for n in (32, 96):
            meshes.append((f"spheroid-{r}-{n}", spheroid_mesh(r, n, n)))
    for lmax, amp, seed, level in [(2, 0.1, 1, 2), (3, 0.15, 2, 3), (4, 0.1, 42, 3),
                                   (5, 0.05, 3, 3), (6, 0.08, 4, 3), (4, 0.2, 5, 2)]:
        meshes.append((f"bumpy-{lmax}-{amp}-{seed}-{level}", bumpy_sphere(lmax, amp, seed, level)))
    return meshes


@pytest.fixture(scope="session")
def corpus():
    return twenty_meshes()


@pytest.fixture(scope="session")
def cube():
    return unit_cube()


@pytest.fixture(scope="session")
def descent_run():
    """The 300-step penalty-free descent from bumpy_sphere(4, 0.1, 42, 3)."""
    import time

    start = bumpy_sphere(4, 0.1, 42, 3)
    t0 = time.perf_counter()
    final, trace = minimize(start, DescentConfig(max_steps=300))
    return start, final, trace, time.perf_counter() - t0


@pytest.fixture(scope="session")
def verify_runs():
    return {seed: run_verify(VerifyConfig(samples=100, c0=1.0, seed=seed)) for seed in (7, 8, 9)}


# -- acceptance summary ------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        if report.when == "call" or name not in _acceptance:
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")

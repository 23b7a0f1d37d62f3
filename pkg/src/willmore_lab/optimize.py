"""Willmore-energy descent with an optional isoperimetric-ratio penalty."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import SPHERE_ISOPERIMETRIC, SPHERE_WILLMORE
from .curvature import face_geometry, laplacian_contributions, mixed_area_contributions
from .errors import MeshTooLarge, ValidationFailed
from .functionals import enclosed_volume, isoperimetric_ratio, surface_area, willmore_energy
from .mesh import TriangleMesh

MAX_GRADIENT_VERTICES = 10_000
MIN_STEP = 1e-12
_BATCH = 2048


@dataclass(frozen=True)
class DescentConfig:
    max_steps: int = 300
    initial_step: float = 1.0
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    grad_tol: float = 1e-8
    sigma_target: float | None = None
    penalty_weight: float = 0.0
    fd_epsilon: float = 1e-6

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if not 0 < self.armijo_c <= 0.5:
            raise ValueError("armijo_c must lie in (0, 0.5]")
        if not 0.1 < self.backtrack_factor < 0.9:
            raise ValueError("backtrack_factor must lie in (0.1, 0.9)")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not self.fd_epsilon > 0:
            raise ValueError("fd_epsilon must be positive")
        if self.penalty_weight < 0:
            raise ValueError("penalty_weight must be >= 0")
        if self.penalty_weight > 0 and self.sigma_target is None:
            raise ValueError("penalty_weight > 0 requires sigma_target")
        if self.sigma_target is not None and self.sigma_target < SPHERE_ISOPERIMETRIC * (1 - 1e-12):
            raise ValueError(f"sigma_target must be >= {SPHERE_ISOPERIMETRIC:.6f}")

    @property
    def penalised(self) -> bool:
        return self.sigma_target is not None and self.penalty_weight > 0


def _penalty(area, volume, config):
    if not config.penalised:
        return 0.0 * area
    ratio = area / volume ** (2.0 / 3.0)
    return config.penalty_weight * (ratio - config.sigma_target) ** 2


def objective(mesh: TriangleMesh, config: DescentConfig) -> float:
    """``W + weight * (I - sigma)**2``, or plain ``W`` without a target."""
    w = willmore_energy(mesh)
    if not config.penalised:
        return w
    return w + float(_penalty(surface_area(mesh), enclosed_volume(mesh), config))


class _LocalStencil:
    """Padded index tables for one-ring-local energy evaluation.

    For vertex ``i`` the energy terms that depend on ``x_i`` are those of
    the vertices in its closed one-ring ``N(i)``, and each of those needs
    every face touching it.
    """

    def __init__(self, mesh: TriangleMesh):
        n = mesh.n_vertices
        faces = mesh.faces
        ring = mesh.vertex_neighbors
        vf = [[] for _ in range(n)]
        for f, tri in enumerate(faces.tolist()):
            for v in tri:
                vf[v].append(f)
        locals_v = [np.concatenate([[i], ring[i]]) for i in range(n)]
        locals_f = [np.unique(np.concatenate([vf[j] for j in lv])) for lv in locals_v]
        self.n_slots = max(len(lv) for lv in locals_v)
        self.n_faces = max(len(lf) for lf in locals_f)
        s, m = self.n_slots, self.n_faces
        self.face = np.zeros((n, m), dtype=np.int64)
        self.valid = np.zeros((n, m), dtype=bool)
        self.slot = np.full((n, m, 3), s, dtype=np.int64)  # slot s is a sink
        self.star = np.zeros((n, m), dtype=bool)
        self.is_center = np.zeros((n, m, 3), dtype=bool)
        for i, (lv, lf) in enumerate(zip(locals_v, locals_f)):
            k = len(lf)
            self.face[i, :k] = lf
            self.face[i, k:] = lf[0]
            self.valid[i, :k] = True
            pos = {int(v): a for a, v in enumerate(lv)}
            tri = faces[lf]
            self.slot[i, :k] = np.vectorize(lambda v: pos.get(v, s))(tri)
            self.is_center[i, :k] = tri == i
            self.star[i, :k] = self.is_center[i, :k].any(axis=1)


def _local_terms(corners, stencil, rows):
    """Local Willmore sum, star area and star volume for a batch of vertices."""
    g = face_geometry(corners)
    valid = stencil.valid[rows]
    area_c = mixed_area_contributions(g) * valid[..., None]
    lap_c = laplacian_contributions(g) * valid[..., None, None]
    b = len(rows)
    width = stencil.n_slots + 1
    idx = (np.arange(b)[:, None, None] * width + stencil.slot[rows]).ravel()
    acc_a = np.bincount(idx, weights=area_c.ravel(), minlength=b * width).reshape(b, width)
    lap_flat = lap_c.reshape(-1, 3)
    acc_l = np.stack(
        [np.bincount(idx, weights=lap_flat[:, k], minlength=b * width) for k in range(3)], axis=-1
    ).reshape(b, width, 3)
    a, lap = acc_a[:, :-1], acc_l[:, :-1]
    used = a > 0
    w = np.where(used, np.einsum("bsk,bsk->bs", lap, lap) / (16.0 * np.where(used, a, 1.0)), 0.0)
    star = stencil.star[rows] & valid
    p = corners
    det = np.einsum("bfi,bfi->bf", p[..., 0, :], np.cross(p[..., 1, :], p[..., 2, :]))
    return w.sum(axis=1), (g.area * star).sum(axis=1), (det * star).sum(axis=1) / 6.0


def objective_gradient(mesh: TriangleMesh, config: DescentConfig, stencil=None) -> np.ndarray:
    """Central finite differences of :func:`objective`, one vertex coordinate at a time.

    The step for coordinate ``x`` is ``fd_epsilon * (1 + |x|)``. Each
    difference is evaluated on the faces around the perturbed vertex's
    one-ring, the only part of the energy that changes.

    Raises
    ------
    MeshTooLarge
        Above 10^4 vertices.
    """
    n = mesh.n_vertices
    if n > MAX_GRADIENT_VERTICES:
        raise MeshTooLarge(f"{n} vertices exceeds the finite-difference guard {MAX_GRADIENT_VERTICES}")
    if stencil is None:
        stencil = _LocalStencil(mesh)
    x = mesh.vertices
    total_area = surface_area(mesh)
    total_volume = enclosed_volume(mesh)
    steps = config.fd_epsilon * (1.0 + np.abs(x))
    grad = np.empty((n, 3))

    rows_all = np.repeat(np.arange(n), 3)
    dims_all = np.tile(np.arange(3), n)
    for start in range(0, 3 * n, _BATCH):
        rows = rows_all[start:start + _BATCH]
        dims = dims_all[start:start + _BATCH]
        base = x[mesh.faces[stencil.face[rows]]]  # (b, m, 3, 3)
        h = steps[rows, dims]
        sel = np.nonzero(stencil.is_center[rows])
        values = []
        for sign in (1.0, -1.0):
            corners = base.copy()
            corners[sel[0], sel[1], sel[2], dims[sel[0]]] += sign * h[sel[0]]
            values.append(_local_terms(corners, stencil, rows))
        (wp, ap, vp), (wm, am, vm) = values
        _, a0, v0 = _local_terms(base, stencil, rows)
        diff = wp - wm
        if config.penalised:
            pp = _penalty(total_area + (ap - a0), total_volume + (vp - v0), config)
            pm = _penalty(total_area + (am - a0), total_volume + (vm - v0), config)
            diff = diff + (pp - pm)
        grad[rows, dims] = diff / (2.0 * h)
    return grad


@dataclass(frozen=True)
class TraceRecord:
    step: int
    objective: float
    willmore: float
    isoperimetric_ratio: float
    step_size: float
    grad_maxnorm: float


TRACE_COLUMNS = ("step", "objective", "willmore", "isoperimetric_ratio", "step_size", "grad_maxnorm")


@dataclass
class DescentTrace:
    records: list = field(default_factory=list)
    termination: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for rec in self.records:
            writer.writerow([rec.step] + [f"{getattr(rec, c):.17g}" for c in TRACE_COLUMNS[1:]])
        return buf.getvalue()


def area_gauge(mesh: TriangleMesh) -> TriangleMesh:
    """Rescale about the origin to total area ``4 pi``."""
    scale = math.sqrt(SPHERE_WILLMORE / surface_area(mesh))
    return mesh.with_vertices(mesh.vertices * scale)


def minimize(mesh: TriangleMesh, config: DescentConfig = DescentConfig()):
    """Steepest descent with Armijo backtracking.

    Every accepted iterate is rescaled to area ``4 pi``. Trial points
    that fail mesh validation count as rejected and shrink the step.
    Termination is ``converged`` (gradient max-norm below ``grad_tol``),
    ``max_steps``, or ``line_search_failed`` (step below 1e-12).

    Returns
    -------
    mesh : TriangleMesh
        Last accepted mesh.
    trace : DescentTrace
        One record per accepted step plus the starting state.
    """
    current = area_gauge(mesh)
    stencil = _LocalStencil(current)
    f = objective(current, config)
    trace = DescentTrace()

    def record(step, m, obj, t):
        trace.records.append(TraceRecord(step, obj, willmore_energy(m), isoperimetric_ratio(m), t, math.nan))

    def set_grad_norm(gmax):
        rec = trace.records[-1]
        trace.records[-1] = TraceRecord(rec.step, rec.objective, rec.willmore, rec.isoperimetric_ratio,
                                        rec.step_size, gmax)

    record(0, current, f, 0.0)
    t = config.initial_step
    accepted = 0
    while True:
        grad = objective_gradient(current, config, stencil)
        gmax = float(np.abs(grad).max())
        set_grad_norm(gmax)
        if gmax < config.grad_tol:
            trace.termination = "converged"
            break
        if accepted >= config.max_steps:
            trace.termination = "max_steps"
            break
        slope = float(np.sum(grad * grad))
        t = min(t / config.backtrack_factor, 1e12)
        while True:
            if t < MIN_STEP:
                break
            try:
                trial = current.with_vertices(current.vertices - t * grad)
            except ValidationFailed:
                t *= config.backtrack_factor
                continue
            f_trial = objective(trial, config)
            if f_trial <= f - config.armijo_c * t * slope:
                break
            t *= config.backtrack_factor
        if t < MIN_STEP:
            trace.termination = "line_search_failed"
            break
        current = area_gauge(trial)
        f = objective(current, config)
        accepted += 1
        record(accepted, current, f, t)
    return current, trace

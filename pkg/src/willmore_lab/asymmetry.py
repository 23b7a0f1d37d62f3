"""Monte-Carlo estimate of the asymmetry index ``inf |Omega sym-diff B(x0, r)|``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import SampleBudgetTooSmall
from .mesh import TriangleMesh

MIN_SAMPLES = 10_000
CHUNK = 1 << 16

# generic directions: no mesh we generate has faces parallel to these
_RAY_DIRECTIONS = np.array([
    [0.2672612419124244, 0.5345224838248488, 0.8017837257372732],
    [-0.6172133998483676, 0.3086066999241838, 0.7229568912920298],
    [0.4082482904638631, -0.8164965809277261, 0.4082482904638631],
    [0.9128709291752769, 0.1825741858350554, -0.3651483716701107],
])
_AMBIGUITY_TOL = 1e-10
_MAX_PAIRS = 4_000_000


def _frame(direction):
    d = direction / np.linalg.norm(direction)
    helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(d, helper)
    u /= np.linalg.norm(u)
    v = np.cross(d, u)
    return np.stack([u, v, d])


def _ray_parity(mesh: TriangleMesh, points: np.ndarray, direction: np.ndarray):
    """Crossing counts along ``direction`` and a flag for near-degenerate hits."""
    q = _frame(direction)
    tri = mesh.corners @ q.T  # (F, 3, 3) in (u, v, d) coordinates
    pts = points @ q.T
    n_pts = len(pts)
    crossings = np.zeros(n_pts, dtype=np.int64)
    ambiguous = np.zeros(n_pts, dtype=bool)

    lo = tri[..., :2].min(axis=(0, 1))
    hi = tri[..., :2].max(axis=(0, 1))
    g = int(np.clip(math.sqrt(len(tri) / 2.0), 1, 512))
    cell = (hi - lo) / g
    cell[cell == 0] = 1.0

    def cell_of(xy):
        return np.clip(((xy - lo) / cell).astype(np.int64), 0, g - 1)

    in_box = np.all((pts[:, :2] >= lo) & (pts[:, :2] <= hi), axis=1)
    box_idx = np.flatnonzero(in_box)
    pc = cell_of(pts[box_idx, :2])
    pcell = pc[:, 0] * g + pc[:, 1]
    order = np.argsort(pcell, kind="stable")
    sorted_pts = box_idx[order]
    starts = np.searchsorted(pcell[order], np.arange(g * g))
    ends = np.searchsorted(pcell[order], np.arange(g * g), side="right")

    fmin = cell_of(tri[..., :2].min(axis=1))
    fmax = cell_of(tri[..., :2].max(axis=1))
    span = fmax - fmin + 1
    reps = span[:, 0] * span[:, 1]
    face_of_pair = np.repeat(np.arange(len(tri)), reps)
    local = np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
    ci = fmin[face_of_pair, 0] + local // span[face_of_pair, 1]
    cj = fmin[face_of_pair, 1] + local % span[face_of_pair, 1]
    pair_cell = ci * g + cj
    counts = ends[pair_cell] - starts[pair_cell]
    keep = counts > 0
    face_of_pair, pair_cell, counts = face_of_pair[keep], pair_cell[keep], counts[keep]

    bounds = np.concatenate([[0], np.cumsum(counts)])
    begin = 0
    while begin < len(counts):
        end = int(np.searchsorted(bounds, bounds[begin] + _MAX_PAIRS, side="right")) - 1
        end = max(end, begin + 1)
        c = counts[begin:end]
        f = np.repeat(face_of_pair[begin:end], c)
        offset = np.arange(c.sum()) - np.repeat(np.cumsum(c) - c, c)
        p = sorted_pts[np.repeat(starts[pair_cell[begin:end]], c) + offset]
        _accumulate_hits(tri[f], pts[p], p, crossings, ambiguous)
        begin = end
    return crossings, ambiguous


def _accumulate_hits(t, pts, idx, crossings, ambiguous):
    a, b, c = t[:, 0], t[:, 1], t[:, 2]
    xy = pts[:, :2]

    def edge(p, q):
        return (q[:, 0] - p[:, 0]) * (xy[:, 1] - p[:, 1]) - (q[:, 1] - p[:, 1]) * (xy[:, 0] - p[:, 0])

    area2 = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.stack([edge(b, c), edge(c, a), edge(a, b)], axis=1) / area2[:, None]
    flat = np.abs(area2) <= 1e-300
    lam_min = lam.min(axis=1)
    inside = (lam_min > _AMBIGUITY_TOL) & ~flat
    near_edge = (np.abs(lam_min) <= _AMBIGUITY_TOL) & ~flat
    z = np.einsum("ij,ij->i", np.nan_to_num(lam), t[:, :, 2])
    scale = np.abs(t[:, :, 2]).max(axis=1) + np.abs(pts[:, 2])
    on_surface = inside & (np.abs(z - pts[:, 2]) <= _AMBIGUITY_TOL * (scale + 1e-300))
    hit = inside & (z > pts[:, 2]) & ~on_surface
    np.add.at(crossings, idx[hit], 1)
    ambiguous[idx[near_edge | on_surface]] = True


def points_inside(mesh: TriangleMesh, points) -> np.ndarray:
    """Ray-parity inside test for a closed mesh.

    Points whose ray grazes an edge or vertex are re-tested along the next
    fixed direction; after all directions the last parity is used.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    result = np.zeros(len(points), dtype=bool)
    todo = np.arange(len(points))
    for direction in _RAY_DIRECTIONS:
        crossings, ambiguous = _ray_parity(mesh, points[todo], direction)
        result[todo] = crossings % 2 == 1
        todo = todo[ambiguous]
        if not len(todo):
            break
    return result


def volume_centroid(mesh: TriangleMesh) -> np.ndarray:
    p = mesh.corners
    det = np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2]))
    return (det[:, None] * p.sum(axis=1)).sum(axis=0) / (4.0 * det.sum())


@dataclass(frozen=True)
class AsymmetryEstimate:
    value: float
    std_error: float
    center: tuple
    radius: float
    samples: int


def uniform_box_samples(lo, hi, samples: int, seed: int) -> np.ndarray:
    """Uniform points in the box, drawn chunk by chunk from a split seed.

    Each chunk of ``CHUNK`` points owns an independent child stream, so
    chunks can be generated in any order or in parallel and still give
    the same array.
    """
    n_chunks = -(-samples // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    parts = []
    for k, child in enumerate(children):
        m = min(CHUNK, samples - k * CHUNK)
        parts.append(np.random.default_rng(child).random((m, 3)))
    return lo + np.concatenate(parts) * (hi - lo)


def asymmetry_index(mesh: TriangleMesh, samples: int = 200_000, seed: int = 0) -> AsymmetryEstimate:
    """Estimate ``min_x0 |Omega sym-diff B(x0, r)|`` with ``|B| = |Omega|``.

    Since the ball and the domain have equal volume, the symmetric
    difference is ``2 |Omega \\ B|``; only the mesh bounding box is
    sampled. The centre is optimised with Nelder-Mead from the volume
    centroid on a fixed sample set.
    """
    if samples < MIN_SAMPLES:
        raise SampleBudgetTooSmall(f"need at least {MIN_SAMPLES} samples, got {samples}")
    volume = mesh.signed_volume
    radius = (3.0 * volume / (4.0 * math.pi)) ** (1.0 / 3.0)
    lo, hi = mesh.vertices.min(axis=0), mesh.vertices.max(axis=0)
    box_volume = float(np.prod(hi - lo))
    pts = uniform_box_samples(lo, hi, samples, seed)
    inner = pts[points_inside(mesh, pts)]

    def outside_fraction(x0):
        d2 = np.einsum("ij,ij->i", inner - x0, inner - x0)
        return np.count_nonzero(d2 > radius * radius) / samples

    start = volume_centroid(mesh)
    simplex = np.vstack([start, start + 0.05 * radius * np.eye(3)])
    res = minimize(
        outside_fraction,
        start,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": 1e-4 * radius, "fatol": 0.0, "maxiter": 2000},
    )
    p = outside_fraction(res.x)
    value = 2.0 * box_volume * p
    std_error = 2.0 * box_volume * math.sqrt(p * (1.0 - p) / samples)
    return AsymmetryEstimate(value, std_error, tuple(float(c) for c in res.x), radius, samples)

"""Empirical sweep of the ratio isoperimetric deficit / Willmore deficit."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .functionals import compute_report, verify_volume_deficit
from .mesh import bumpy_sphere, spheroid_mesh
from .spheroid import deficit_ratio


@dataclass(frozen=True)
class VerifyConfig:
    """Sample budget, isoperimetric-deficit cap ``c0`` and generator ranges.

    Even-numbered samples are bumpy spheres, odd-numbered ones spheroid
    meshes.
    """

    samples: int = 100
    c0: float = 1.0
    seed: int = 7
    lmax_range: tuple = (2, 6)
    amp_range: tuple = (0.05, 0.2)
    levels: tuple = (4,)
    r_range: tuple = (1.1, 2.0)
    spheroid_grid: int = 192

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.c0 > 0:
            raise ValueError("c0 must be positive")
        lo, hi = self.lmax_range
        if not 2 <= lo <= hi:
            raise ValueError("lmax_range must satisfy 2 <= lo <= hi")
        lo, hi = self.amp_range
        if not 0 < lo <= hi:
            raise ValueError("amp_range must satisfy 0 < lo <= hi")
        lo, hi = self.r_range
        if not 1 < lo <= hi:
            raise ValueError("r_range must satisfy 1 < lo <= hi")
        if not self.levels or min(self.levels) < 0:
            raise ValueError("levels must be non-empty and >= 0")
        if self.spheroid_grid < 8:
            raise ValueError("spheroid_grid must be >= 8")


VERIFY_COLUMNS = (
    "sample", "kind", "level", "lmax", "amp", "seed", "r", "grid",
    "isoperimetric_deficit", "willmore_deficit", "ratio",
    "volume_deficit", "volume_ratio", "analytic_ratio",
)


def draw_parameters(config: VerifyConfig) -> list[dict]:
    """Generator parameters for every sample, from one seeded stream."""
    rng = np.random.default_rng(config.seed)
    params = []
    for k in range(config.samples):
        if k % 2 == 0:
            params.append({
                "sample": k,
                "kind": "bumpy",
                "level": int(rng.choice(config.levels)),
                "lmax": int(rng.integers(config.lmax_range[0], config.lmax_range[1] + 1)),
                "amp": float(rng.uniform(*config.amp_range)),
                "seed": int(rng.integers(0, 2**63 - 1)),
            })
        else:
            params.append({
                "sample": k,
                "kind": "spheroid",
                "r": float(rng.uniform(*config.r_range)),
                "grid": config.spheroid_grid,
            })
    return params


def evaluate_sample(p: dict) -> dict:
    if p["kind"] == "bumpy":
        mesh = bumpy_sphere(p["lmax"], p["amp"], p["seed"], p["level"])
    else:
        mesh = spheroid_mesh(p["r"], p["grid"], p["grid"])
    rep = compute_report(mesh)
    vol_def, w_def = verify_volume_deficit(mesh)
    row = {c: "" for c in VERIFY_COLUMNS}
    row.update(p)
    row.update(
        isoperimetric_deficit=rep.isoperimetric_deficit,
        willmore_deficit=rep.willmore_deficit,
        ratio=rep.isoperimetric_deficit / rep.willmore_deficit,
        volume_deficit=vol_def,
        volume_ratio=vol_def / w_def,
    )
    if p["kind"] == "spheroid":
        row["analytic_ratio"] = 1.0 / deficit_ratio(p["r"])
    return row


@dataclass
class VerifyResult:
    rows: list
    drawn: int

    @property
    def retained(self) -> int:
        return len(self.rows)

    @property
    def c_emp(self) -> float:
        return max(r["ratio"] for r in self.rows) if self.rows else math.nan

    @property
    def volume_c_emp(self) -> float:
        return max(r["volume_ratio"] for r in self.rows) if self.rows else math.nan

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(VERIFY_COLUMNS)
        for row in self.rows:
            writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in (row[c] for c in VERIFY_COLUMNS)])
        return buf.getvalue()


def run_verify(config: VerifyConfig) -> VerifyResult:
    """Evaluate every sample and keep those with isoperimetric deficit <= c0."""
    rows = [evaluate_sample(p) for p in draw_parameters(config)]
    kept = [r for r in rows if r["isoperimetric_deficit"] <= config.c0]
    return VerifyResult(kept, len(rows))

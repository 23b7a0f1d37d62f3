"""Closed-form functionals of the spheroids ``E(r)``: the revolution surface
of ``x -> (x, r * sqrt(1 - x**2))`` with ``E(1)`` the unit sphere.

Closed forms exist for the prolate branch ``r >= 1``; the oblate branch
is served by :func:`spheroid_willmore_quadrature` only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import integrate

from .constants import SPHERE_ISOPERIMETRIC, SPHERE_WILLMORE
from .errors import DomainError, NoConvergence, PrecisionLoss

# below this |r - 1| the closed forms are replaced by second-order series
SERIES_SWITCH = 1e-8
# working precision for the deficits, which cancel to O((r - 1)^2)
_DEFICIT_DPS = 60

STATED_LIMIT_CONSTANT = 6.0 * (16.0 * math.pi / 3.0) ** (2.0 / 3.0)
CONTINUOUS_RATIO_AT_SPHERE = SPHERE_WILLMORE / SPHERE_ISOPERIMETRIC


def _check_prolate(r):
    if not r >= 1.0:
        raise DomainError(f"closed form needs r >= 1, got {r}")


def _root_r2m1(r):
    # (r - 1)(r + 1) avoids the rounding of r*r near r = 1
    return math.sqrt((r - 1.0) * (r + 1.0))


def spheroid_willmore(r: float) -> float:
    """Willmore energy ``1/4 int H^2`` of ``E(r)`` for ``r >= 1``."""
    _check_prolate(r)
    h = r - 1.0
    if h <= SERIES_SWITCH:
        return SPHERE_WILLMORE * (1.0 + 8.0 / 15.0 * h * h)
    s = _root_r2m1(r)
    # pi/2 - atan(1/s) == asin(s/r); the asin form keeps its digits near r = 1
    return math.pi * ((7.0 * r * r + 2.0) / (3.0 * r * r) + r * r / s * math.asin(s / r))


def spheroid_area(r: float) -> float:
    _check_prolate(r)
    h = r - 1.0
    if h <= SERIES_SWITCH:
        return SPHERE_WILLMORE * (1.0 + 2.0 / 3.0 * h + h * h / 15.0)
    s = _root_r2m1(r)
    return 2.0 * math.pi * (1.0 + r * r / s * math.asin(s / r))


def spheroid_volume(r: float) -> float:
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    return 4.0 * math.pi * r / 3.0


def spheroid_isoperimetric(r: float) -> float:
    _check_prolate(r)
    h = r - 1.0
    if h <= SERIES_SWITCH:
        return SPHERE_ISOPERIMETRIC * (1.0 + 8.0 / 45.0 * h * h)
    s = _root_r2m1(r)
    return SPHERE_ISOPERIMETRIC * 0.5 * (r ** (-2.0 / 3.0) + r ** (4.0 / 3.0) / s * math.asin(s / r))


def _willmore_integrand(theta, r):
    # x = sin(theta): f = cos, f' = -tan, f'' = -1/cos^3, dx = cos dtheta.
    # With p = q cos(theta) = sqrt(cos^2 + r^2 sin^2) the curvature bracket
    # f''/q^3 + f'/(x q) becomes -(1/p^3 + 1/p), finite at both ends.
    x = math.sin(theta)
    c = math.cos(theta)
    p = math.sqrt(c * c + r * r * x * x)
    bracket = 1.0 / p**3 + 1.0 / p
    return x * p * r * r * bracket * bracket


def spheroid_willmore_quadrature(r: float, tol: float = 1e-10) -> float:
    """Willmore energy of ``E(r)`` by adaptive Gauss-Kronrod quadrature.

    Integrates the revolution formula in the polar angle, which removes
    the derivative singularity at the rim. Valid for every ``r > 0``.

    Raises
    ------
    NoConvergence
        If the error estimate exceeds ``tol`` or the subdivision limit is hit.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    if not 0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol}")
    # W = 1/4 * 4 pi * integral, so the integral needs tol / pi
    value, err, info, *rest = integrate.quad(
        _willmore_integrand, 0.0, math.pi / 2.0, args=(r,),
        epsabs=tol / math.pi, epsrel=0.0, limit=200, full_output=True,
    )
    if rest or err > tol / math.pi:
        msg = rest[0] if rest else f"error estimate {err:.3e} above tolerance"
        raise NoConvergence(f"quadrature for r={r}: {msg}")
    return math.pi * value


def _mp_deficits(r):
    with mpmath.workdps(_DEFICIT_DPS):
        r = mpmath.mpf(r)
        pi = mpmath.pi
        s = mpmath.sqrt((r - 1) * (r + 1))
        asn = mpmath.asin(s / r)
        w = pi * ((7 * r**2 + 2) / (3 * r**2) + r**2 / s * asn)
        i0 = (6 * mpmath.sqrt(pi)) ** (mpmath.mpf(2) / 3)
        iso = i0 / 2 * (r ** (-mpmath.mpf(2) / 3) + r ** (mpmath.mpf(4) / 3) / s * asn)
        return w - 4 * pi, iso - i0


def spheroid_deficits(r: float) -> tuple[float, float]:
    """``(W - 4 pi, I - I(S^2))`` for ``r >= 1`` without cancellation error.

    The closed forms are evaluated in extended precision so that both
    deficits keep full double precision even for ``r - 1`` near 1e-12.
    """
    _check_prolate(r)
    if r == 1.0:
        return 0.0, 0.0
    wd, idf = _mp_deficits(r)
    return float(wd), float(idf)


def _ratio(r):
    wd, idf = _mp_deficits(r)
    return float(wd / idf)


def deficit_ratio(r: float) -> float:
    """``(W(E(r)) - 4 pi) / (I(E(r)) - I(S^2))`` for ``r > 1 + 1e-6``."""
    if not r > 1.0 + 1e-6:
        raise DomainError(f"deficit ratio needs r > 1 + 1e-6, got {r}")
    return _ratio(r)


@dataclass(frozen=True)
class SpheroidEval:
    r: float
    willmore: float
    area: float
    volume: float
    isoperimetric_ratio: float
    willmore_deficit: float
    isoperimetric_deficit: float
    deficit_ratio: float


def evaluate(r: float) -> SpheroidEval:
    """All closed-form values at ``r >= 1``; the ratio is NaN at ``r = 1``."""
    wd, idf = spheroid_deficits(r)
    return SpheroidEval(
        r=r,
        willmore=spheroid_willmore(r),
        area=spheroid_area(r),
        volume=spheroid_volume(r),
        isoperimetric_ratio=spheroid_isoperimetric(r),
        willmore_deficit=wd,
        isoperimetric_deficit=idf,
        deficit_ratio=wd / idf if idf > 0 else math.nan,
    )


SWEEP_COLUMNS = (
    "r", "willmore", "area", "volume", "isoperimetric_ratio",
    "willmore_deficit", "isoperimetric_deficit", "deficit_ratio", "quadrature_check_abs_err",
)


def sweep(r_min: float, r_max: float, steps: int, tol: float = 1e-10) -> list[dict]:
    """Closed-form rows on a uniform grid plus the quadrature cross-check."""
    if not 1.0 < r_min < r_max:
        raise DomainError(f"need 1 < r_min < r_max, got {r_min}, {r_max}")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    rows = []
    for r in np.linspace(r_min, r_max, steps):
        r = float(r)
        e = evaluate(r)
        row = {k: getattr(e, k) for k in SWEEP_COLUMNS[:-1]}
        row["quadrature_check_abs_err"] = abs(e.willmore - spheroid_willmore_quadrature(r, tol))
        rows.append(row)
    return rows


def richardson_tableau(values, ratio: float = 2.0) -> list[list[float]]:
    """Richardson tableau for samples at ``h_k = h_0 / ratio**k``.

    Assumes ``value(h) = L + a_1 h + a_2 h^2 + ...``; row ``i`` holds the
    ``i + 1`` extrapolants available after sample ``i``.
    """
    rows = []
    for i, v in enumerate(values):
        row = [float(v)]
        for j in range(1, i + 1):
            fac = ratio**j
            row.append(row[j - 1] + (row[j - 1] - rows[i - 1][j - 1]) / (fac - 1.0))
        rows.append(row)
    return rows


@dataclass
class LimitResult:
    limit: float
    table: list = field(default_factory=list)          # (r, ratio) rows
    extrapolants: list = field(default_factory=list)   # tableau diagonal
    stated_constant: float = STATED_LIMIT_CONSTANT
    continuous_ratio: float = CONTINUOUS_RATIO_AT_SPHERE

    @property
    def stated_constant_discrepancy(self) -> bool:
        """True when the stated constant disagrees with the extrapolated limit by over 1%."""
        return abs(self.stated_constant - self.limit) > 0.01 * abs(self.limit)

    def to_dict(self) -> dict:
        return {
            "extrapolated_limit": self.limit,
            "table": [{"r": r, "ratio": q} for r, q in self.table],
            "extrapolants": list(self.extrapolants),
            "stated_constant": self.stated_constant,
            "continuous_ratio_at_sphere": self.continuous_ratio,
            "stated_constant_discrepancy": self.stated_constant_discrepancy,
        }


def deficit_ratio_limit(kmax: int = 20, rtol: float = 5e-5) -> LimitResult:
    """Extrapolate the deficit ratio to ``r -> 1`` from ``r = 1 + 2**-k``, ``k = 4..kmax``.

    Raises
    ------
    PrecisionLoss
        If the last three diagonal extrapolants spread by more than
        ``rtol`` relative; the partial table is attached.
    """
    if not 8 <= kmax <= 40:
        raise DomainError(f"kmax must lie in [8, 40], got {kmax}")
    table = []
    for k in range(4, kmax + 1):
        r = 1.0 + 2.0**-k
        table.append((r, _ratio(r)))
    tableau = richardson_tableau([q for _, q in table])
    diag = [row[-1] for row in tableau]
    last = diag[-3:]
    spread = max(last) - min(last)
    if not math.isfinite(spread) or spread > rtol * abs(last[-1]):
        raise PrecisionLoss(f"extrapolants {last} spread by {spread:.3e}", table, diag)
    return LimitResult(limit=diag[-1], table=table, extrapolants=diag)

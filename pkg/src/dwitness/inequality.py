"""The three-variable constraint inequality behind the small-t certificate.

For fixed 0 < t < 1 and positive x1 x2 x3 = 1 the ratio f stays >= 1-t;
equivalently the polynomial g is nonnegative on the constraint surface with
its minimum 0 at (1,1,1).  This module evaluates both sides, scans the
surface, checks the stationarity system and the factorized quartic it
reduces to, and exposes the per-zero-pattern upper bounds on the allowed
subtraction scale c^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

DEGENERACY_RADIUS = 1e-6
CONSTRAINT_TOL = 1e-12


class DegeneratePoint(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintPoint:
    """Positive coordinates with x1*x2*x3 = 1, and the strength t."""

    t: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise ValueError(f"t={self.t} outside (0, 1)")
        if min(self.x1, self.x2, self.x3) <= 0.0:
            raise ValueError("coordinates must be positive")
        prod = self.x1 * self.x2 * self.x3
        if abs(prod - 1.0) > CONSTRAINT_TOL * max(1.0, abs(prod)):
            raise ValueError(f"x1*x2*x3 = {prod} != 1")

    @property
    def coords(self) -> Tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


def g_poly(t, x1, x2, x3):
    """Polynomial side; plain arithmetic, so array arguments broadcast."""
    return ((2.0 * t * t - 2.0 * t - 3.0)
            + (1.0 - t) * x1 + (1.0 - t) * x2 + (1.0 - t * t) * x3
            + (2.0 * t - t * t) * x1 * x2 + t * x2 * x3 + t * x1 * x3)


def f_ratio(t, x1, x2, x3):
    """Ratio side; no domain checks, array arguments broadcast."""
    s1 = 1.0 / ((3.0 - t) + t * x1)
    s2 = 1.0 / ((3.0 - t) + t * x2)
    s3 = 1.0 / ((3.0 - t) + t * x3)
    num = 1.0 - (s1 + s2 + s3)
    den = s1 + s2 - 4.0 * s1 * s2 - s1 * s3 - s2 * s3
    return num / den


def g_value(p: ConstraintPoint) -> float:
    return float(g_poly(p.t, p.x1, p.x2, p.x3))


def f_value(p: ConstraintPoint) -> float:
    """The ratio at a constraint point; 0/0 at (1,1,1) is rejected."""
    if max(abs(p.x1 - 1.0), abs(p.x2 - 1.0), abs(p.x3 - 1.0)) < CONSTRAINT_TOL:
        raise DegeneratePoint("the ratio is 0/0 at (1,1,1)")
    return float(f_ratio(p.t, p.x1, p.x2, p.x3))


@dataclass(frozen=True)
class ScanResult:
    t: float
    samples: int
    spread: float
    seed: int
    min_g: float
    min_f_gap: float
    argmin: Tuple[float, float, float]

    def to_json(self) -> dict:
        return {"t": self.t, "samples": self.samples, "spread": self.spread,
                "seed": self.seed, "min_g": self.min_g, "min_f_gap": self.min_f_gap,
                "argmin": list(self.argmin)}


def constrained_scan(t: float, samples: int, spread: float = 3.0, seed: int = 0) -> ScanResult:
    """Log-uniform sampling of the constraint surface.

    Coordinates are exp of uniforms in [-spread, spread] with the third fixed
    by the constraint.  min_g runs over every sample; the f gap excludes a
    1e-6 box around (1,1,1) where the ratio degenerates.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"t={t} outside (0, 1)")
    rng = np.random.default_rng(seed)
    u = rng.uniform(-spread, spread, size=(samples, 2))
    x1 = np.exp(u[:, 0])
    x2 = np.exp(u[:, 1])
    x3 = np.exp(-u[:, 0] - u[:, 1])
    g = g_poly(t, x1, x2, x3)
    k = int(np.argmin(g))
    away = np.maximum(np.abs(x1 - 1.0), np.maximum(np.abs(x2 - 1.0), np.abs(x3 - 1.0))) >= DEGENERACY_RADIUS
    if np.any(away):
        gaps = f_ratio(t, x1[away], x2[away], x3[away]) - (1.0 - t)
        min_gap = float(np.min(gaps))
    else:
        min_gap = float("inf")
    return ScanResult(t=t, samples=samples, spread=spread, seed=seed,
                      min_g=float(g[k]), min_f_gap=min_gap,
                      argmin=(float(x1[k]), float(x2[k]), float(x3[k])))


def lagrange_residual(t: float, x, lam: float) -> Tuple[float, float, float, float]:
    """The four stationarity equations of g on the constraint surface.

    Returns the left-hand sides (all zero at a stationary point): three
    partial derivatives augmented with the multiplier term, and the
    constraint itself.
    """
    x1, x2, x3 = (float(v) for v in x)
    r1 = (1.0 - t) + (2.0 * t - t * t) * x2 + t * x3 + lam * x2 * x3
    r2 = (1.0 - t) + (2.0 * t - t * t) * x1 + t * x3 + lam * x1 * x3
    r3 = (1.0 - t * t) + t * x2 + t * x1 + lam * x1 * x2
    r4 = x1 * x2 * x3 - 1.0
    return (r1, r2, r3, r4)


def stationary_multiplier(t: float) -> float:
    """Multiplier solving the third stationarity equation at (1,1,1)."""
    # (1 - t^2) + t + t + lam = 0
    return -((1.0 - t * t) + 2.0 * t)


def quartic_factor_check(t: float, x1: float) -> Tuple[float, float]:
    """Factored quartic from eliminating the multiplier, and its cubic factor.

    The product (x1 - 1) * bracket equals the expanded quartic
    (2t - t^2) x1^4 + (1 - t) x1^3 - t x1 + (t^2 - 1); the bracket is
    strictly positive for x1 > 0 and 0 < t < 1, pinning x1 = 1.
    """
    if x1 <= 0.0:
        raise ValueError("x1 must be positive")
    if not 0.0 < t < 1.0:
        raise ValueError(f"t={t} outside (0, 1)")
    bracket = ((2.0 * t - t * t) * x1 ** 3 + (1.0 + t - t * t) * x1 ** 2
               + (1.0 + t - t * t) * x1 + (1.0 - t * t))
    return ((x1 - 1.0) * bracket, bracket)


def quartic_expanded(t: float, x1: float) -> float:
    return (2.0 * t - t * t) * x1 ** 4 + (1.0 - t) * x1 ** 3 - t * x1 + (t * t - 1.0)


def _q(t: float, r: float) -> float:
    return r / (t + (3.0 - t) * r)


def subcase_bound(which: str, t: float, r) -> Tuple[float, bool]:
    """Upper bound on c^2 for one zero-pattern, and whether it covers 1-t.

    S2 takes the full triple (r1, r2, r3) with product 1; S3/S4/S5 take the
    single surviving ratio.  In-domain the bound always dominates 1-t, which
    is exactly what makes the scale c = sqrt(1-t) admissible everywhere.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"t={t} outside (0, 1)")
    if which == "S2":
        r1, r2, r3 = (float(v) for v in r)
        if min(r1, r2, r3) <= 0.0:
            raise ValueError("ratios must be positive")
        if abs(r1 * r2 * r3 - 1.0) > 1e-9 * max(1.0, r1 * r2 * r3):
            raise ValueError("S2 needs r1*r2*r3 = 1")
        if max(abs(r1 - 1.0), abs(r2 - 1.0), abs(r3 - 1.0)) < CONSTRAINT_TOL:
            raise DegeneratePoint("S2 bound is 0/0 at (1,1,1)")
        q1, q2, q3 = _q(t, r1), _q(t, r2), _q(t, r3)
        num = 1.0 - (q1 + q2 + q3)
        bound = num / (num * (q1 + q2) + (q1 - q2) ** 2)
    elif which in ("S3", "S4", "S5"):
        rv = float(r[0]) if np.ndim(r) else float(r)
        if rv <= 0.0:
            raise ValueError("ratio must be positive")
        q = _q(t, rv)
        u = 1.0 / (3.0 - t)
        if which == "S3":
            bound = (1.0 - q - u) / (q - q * u)
        elif which == "S4":
            bound = (1.0 - q - u) / (u - q * u)
        else:
            num = 1.0 - q - u
            bound = num / (num * (q + u) + (q - u) ** 2)
    else:
        raise ValueError(f"unknown subcase {which!r}")
    return (float(bound), bool(bound >= (1.0 - t) - 1e-12))

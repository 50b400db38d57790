"""Radial-limit estimation and classification at the corner.

Rf(theta) = lim_{r -> 0} f(r cos theta, r sin theta) is estimated by
sampling the discrete solution along rays on a dyadic radius ladder and
extrapolating with the power model f(r) ~ L + c r^p.  The profile over a
fan of angles is then classified into the dichotomy: a single constant
across the whole fan, or two outer plateaus joined by a strictly
monotone middle segment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    BelowResolution,
    FitIllConditioned,
    NoisyProfile,
    RayOutsideDomain,
)

__all__ = [
    "RadialProfile",
    "Classification",
    "LimitFit",
    "default_radii",
    "sample_ray",
    "estimate_limit",
    "side_limit",
    "radial_profile",
    "classify",
    "fan_profile",
]

P_MIN, P_MAX = 0.1, 3.0
RESOLUTION_FACTOR = 3.0  # radii below this multiple of local edge length


@dataclass(frozen=True)
class LimitFit:
    """Extrapolated limit with error bar; exponent None when degenerate."""

    limit: float
    error_bar: float
    exponent: object = None


@dataclass(frozen=True)
class RadialProfile:
    """Estimated Rf over a fan of rays strictly inside the wedge."""

    theta_grid: np.ndarray
    limits: np.ndarray
    errors: np.ndarray
    fit_exponents: np.ndarray  # NaN where degenerate
    alpha: float

    def __post_init__(self):
        th = np.asarray(self.theta_grid, dtype=float)
        if np.any(np.diff(th) <= 0):
            raise ValueError("theta_grid must be strictly increasing")
        if th[0] <= -self.alpha or th[-1] >= self.alpha:
            raise ValueError("theta_grid must lie strictly inside (-alpha, alpha)")
        if np.any(np.asarray(self.errors) < 0):
            raise ValueError("error bars must be nonnegative")

    def rows(self):
        return zip(self.theta_grid, self.limits, self.errors, self.fit_exponents)


@dataclass(frozen=True)
class Classification:
    """Profile verdict: ConstantAll, Fan, or Unclassified."""

    kind: str
    tol: float
    value: float = float("nan")     # ConstantAll level
    alpha1: float = float("nan")    # Fan interval endpoints
    alpha2: float = float("nan")
    direction: str = ""             # "increasing" | "decreasing"
    reason: str = ""                # why Unclassified
    consistency_gap: float = float("nan")  # |Rf(-alpha+) - z2|


def default_radii(mesh, k_max=6):
    """Dyadic ladder r_k = (delta*/4) 2^-k with rungs below the mesh
    resolution floor dropped; needs at least 4 usable rungs."""
    r = mesh.domain.delta_star / 4.0 * 0.5 ** np.arange(k_max + 1)
    floor = RESOLUTION_FACTOR * np.array([mesh.edge_target(ri) for ri in r])
    r = r[r >= floor]
    if len(r) < 4:
        raise BelowResolution(
            "fewer than 4 ladder rungs resolve on this mesh; refine h_max"
        )
    return r


def sample_ray(field, theta, radii):
    """Interpolate the field along the ray of angle theta at the given radii.

    Radii must be decreasing and stay at or above 3x the local edge-length
    target; the ray must lie strictly inside the wedge opening.
    """
    mesh = field.mesh
    alpha = mesh.domain.alpha
    theta = float(theta)
    if not (-alpha < theta < alpha):
        raise RayOutsideDomain(
            f"theta={theta:.6g} outside the open wedge (-{alpha:.6g}, {alpha:.6g})"
        )
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) >= 0):
        raise ValueError("radii must be strictly decreasing")
    floor = RESOLUTION_FACTOR * np.array([mesh.edge_target(r) for r in radii])
    if np.any(radii < floor):
        raise BelowResolution(
            f"radius {radii[radii < floor][0]:.3g} below 3x local edge target"
        )
    pts = np.column_stack([radii * np.cos(theta), radii * np.sin(theta)])
    inside = mesh.domain.contains(pts, tol=1e-9)
    if not np.all(inside):
        raise RayOutsideDomain(
            f"ray theta={theta:.6g} exits the domain at r="
            f"{radii[~inside][0]:.3g}"
        )
    return field.interpolate(pts)


def _power_fit(r, v, p):
    A = np.column_stack([np.ones_like(r), r ** p])
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    resid = A @ coef - v
    return coef, float(resid @ resid)


def estimate_limit(values, radii):
    """Extrapolate lim_{r->0} by least squares on f(r) = L + c r^p.

    The exponent is scanned over [0.1, 3] and refined; the error bar is
    max(rms residual, half the gap between the innermost sample and the
    fitted limit).  Constant sequences report exponent None.
    """
    v = np.asarray(values, dtype=float)
    r = np.asarray(radii, dtype=float)
    if len(v) != len(r) or len(v) < 4:
        raise FitIllConditioned("need at least 4 (value, radius) samples")
    order = np.argsort(r)[::-1]
    r, v = r[order], v[order]
    if r[-1] <= 0 or r[0] / r[-1] < 2.0:
        raise FitIllConditioned("radii must be positive and span a dyadic range")

    scale = max(1.0, float(np.max(np.abs(v))))
    if np.max(v) - np.min(v) <= 1e-13 * scale:
        return LimitFit(limit=float(np.mean(v)), error_bar=0.0, exponent=None)

    grid = np.linspace(P_MIN, P_MAX, 59)
    sses = np.array([_power_fit(r, v, p)[1] for p in grid])
    k = int(np.argmin(sses))
    lo = grid[max(0, k - 1)]
    hi = grid[min(len(grid) - 1, k + 1)]
    res = minimize_scalar(
        lambda p: _power_fit(r, v, p)[1], bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-10},
    )
    p = float(np.clip(res.x, P_MIN, P_MAX))
    coef, sse = _power_fit(r, v, p)
    if not np.all(np.isfinite(coef)):
        raise FitIllConditioned("power fit produced non-finite coefficients")
    L = float(coef[0])
    rms = np.sqrt(sse / len(v))
    error_bar = float(max(rms, 0.5 * abs(v[-1] - L)))
    return LimitFit(limit=L, error_bar=error_bar, exponent=p)


def side_limit(field, side="SideMinus"):
    """Extrapolate the boundary trace along a side wall toward the corner.

    Returns a LimitFit; side is "SideMinus" (the Theorem 1 wall, z2) or
    "SidePlus".  Uses boundary vertex values at radii up to delta*/4 with
    the same power-fit model as the interior rays.
    """
    mesh = field.mesh
    names = {"SideMinus": mesh.side_minus_chain, "minus": mesh.side_minus_chain,
             "SidePlus": mesh.side_plus_chain, "plus": mesh.side_plus_chain}
    if side not in names:
        raise ValueError(f"side must be SideMinus or SidePlus, got {side!r}")
    chain = names[side]
    pts = mesh.vertices[chain]
    r = np.hypot(pts[:, 0], pts[:, 1])
    vals = field.values[chain]
    keep = (r > 0) & (r <= mesh.domain.delta_star / 4.0)
    r, vals = r[keep], vals[keep]
    order = np.argsort(r)[::-1]
    r, vals = r[order], vals[order]
    if len(r) > 40:
        idx = np.unique(np.linspace(0, len(r) - 1, 40).astype(int))
        r, vals = r[idx], vals[idx]
    return estimate_limit(vals, r)


def radial_profile(field, n_theta=61, radii=None, k_max=6):
    """Estimate Rf over an interior fan of n_theta rays.

    The grid excludes the walls themselves (side traces are handled by
    side_limit).  Rays are sampled independently and assembled in theta
    order.
    """
    mesh = field.mesh
    alpha = mesh.domain.alpha
    if radii is None:
        radii = default_radii(mesh, k_max=k_max)
    thetas = np.linspace(-alpha, alpha, n_theta + 2)[1:-1]
    limits = np.empty(n_theta)
    errors = np.empty(n_theta)
    exps = np.full(n_theta, np.nan)
    for i, th in enumerate(thetas):
        fit = estimate_limit(sample_ray(field, th, radii), radii)
        limits[i] = fit.limit
        errors[i] = fit.error_bar
        if fit.exponent is not None:
            exps[i] = fit.exponent
    return RadialProfile(
        theta_grid=thetas, limits=limits, errors=errors,
        fit_exponents=exps, alpha=float(alpha),
    )


def _default_tol(errors):
    # 10x the innermost-ring error estimate, but never so small that the
    # noise gate (bars <= tol/4 on 90% of rays) rejects its own default
    med = float(np.median(errors))
    q90 = float(np.quantile(errors, 0.9))
    return max(10.0 * med, 4.05 * q90, 1e-12)


def _coerce_limit(z):
    if isinstance(z, LimitFit):
        return z.limit, z.error_bar
    if isinstance(z, (tuple, list)) and len(z) == 2:
        return float(z[0]), float(z[1])
    return float(z), 0.0


def classify(profile, side_limit_value, tol=None):
    """Classify a radial profile as ConstantAll, Fan, or Unclassified.

    ConstantAll when the total variation of the limits is within tol.
    Otherwise a fan is sought: alpha1 is the largest angle up to which
    the profile is constant within tol from the left wall, alpha2 the
    smallest from which it is constant to the right wall, and the middle
    segment must be monotone (all steps larger than tol/2 of one sign).
    The estimate at the leftmost ray must agree with the side limit z2
    within tol plus the side-limit error bar; any failure downgrades the
    verdict to Unclassified.

    Raises NoisyProfile when fewer than 90% of rays have error bars
    within tol/4.
    """
    limits = np.asarray(profile.limits, dtype=float)
    errors = np.asarray(profile.errors, dtype=float)
    thetas = np.asarray(profile.theta_grid, dtype=float)
    if tol is None:
        tol = _default_tol(errors)
    tol = float(tol)

    frac_ok = float(np.mean(errors <= tol / 4.0))
    if frac_ok < 0.9:
        raise NoisyProfile(
            f"only {100 * frac_ok:.0f}% of rays have error bars within tol/4 "
            f"= {tol / 4:.3g}; refine the mesh or relax tol"
        )

    z2, z2_err = _coerce_limit(side_limit_value)
    gap = float(abs(limits[0] - z2))
    consistent = gap <= tol + z2_err

    tv = float(np.sum(np.abs(np.diff(limits))))
    if tv <= tol:
        if not consistent:
            return Classification(
                kind="Unclassified", tol=tol, consistency_gap=gap,
                reason="constant profile inconsistent with side limit",
            )
        return Classification(
            kind="ConstantAll", tol=tol,
            value=float(np.median(limits)), consistency_gap=gap,
        )

    # prefix plateau: running range from the left stays within tol
    lo = np.minimum.accumulate(limits)
    hi = np.maximum.accumulate(limits)
    pre = np.nonzero(hi - lo <= tol)[0]
    k1 = int(pre[-1]) if len(pre) else 0
    # suffix plateau, same from the right
    lo_r = np.minimum.accumulate(limits[::-1])
    hi_r = np.maximum.accumulate(limits[::-1])
    suf = np.nonzero(hi_r - lo_r <= tol)[0]
    k2 = len(limits) - 1 - (int(suf[-1]) if len(suf) else 0)

    if k1 >= k2:
        return Classification(
            kind="Unclassified", tol=tol, consistency_gap=gap,
            reason="outer plateaus overlap without a monotone middle",
        )
    mid = np.diff(limits[k1:k2 + 1])
    big = mid[np.abs(mid) > tol / 2.0]
    if len(big) and (np.any(big > 0) and np.any(big < 0)):
        return Classification(
            kind="Unclassified", tol=tol, consistency_gap=gap,
            reason="middle segment has significant steps of both signs",
        )
    swing = limits[k2] - limits[k1]
    if abs(swing) <= tol:
        return Classification(
            kind="Unclassified", tol=tol, consistency_gap=gap,
            reason="plateaus differ by less than tol despite total variation",
        )
    if not consistent:
        return Classification(
            kind="Unclassified", tol=tol, consistency_gap=gap,
            reason="leftmost radial limit inconsistent with side limit",
        )
    return Classification(
        kind="Fan", tol=tol,
        alpha1=float(thetas[k1]), alpha2=float(thetas[k2]),
        direction="increasing" if swing > 0 else "decreasing",
        consistency_gap=gap,
    )


def fan_profile(theta_grid, alpha1, alpha2, lo=0.0, hi=1.0):
    """Synthetic fan: lo left of alpha1, smoothstep rise, hi right of alpha2."""
    th = np.asarray(theta_grid, dtype=float)
    t = np.clip((th - alpha1) / (alpha2 - alpha1), 0.0, 1.0)
    return lo + (hi - lo) * (3.0 * t * t - 2.0 * t ** 3)

"""Quantitative comparison machinery on computed solutions.

Implements the height band p(delta) from the Courant-Lebesgue estimate,
oscillation probes on circles around the corner, an empirical modulus of
continuity, and the two-sided barrier sandwich b- < f < b+ built from a
matched pair of torus sheets.

The parametric radius rho(delta) of the continuous argument has no
computable analogue here, so circle probes use the physical radius
sqrt(delta) * delta^* and the checks verify the resulting consequences
(band membership, margin positivity) rather than the parametric
statements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .barriers import barrier_height, contact_inequality_check, in_footprint
from .errors import (
    BarrierFootprintMiss,
    BelowResolution,
    DeltaOutOfRange,
    PreconditionsUnmet,
)
from .solver import graph_area

__all__ = [
    "SandwichReport",
    "p_of_delta",
    "oscillation_on_circle",
    "choose_anchor",
    "footprint_region",
    "sandwich_check",
    "uniform_continuity_probe",
]

CIRCLE_SAMPLES = 720
MAX_PROBE_POINTS = 4000


def p_of_delta(M0, delta):
    """Height band p(delta) = sqrt(8 pi M0 / ln(1/delta))."""
    if not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")
    if M0 <= 0:
        raise ValueError(f"M0 must be positive, got {M0}")
    return float(np.sqrt(8.0 * np.pi * M0 / np.log(1.0 / delta)))


def _circle_points(domain, r, n=CIRCLE_SAMPLES):
    th = np.linspace(-domain.alpha, domain.alpha, n)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    keep = domain.contains(pts, tol=1e-9)
    return pts[keep]


def oscillation_on_circle(field, r):
    """sup - inf of the interpolated field over the circle arc of radius r."""
    mesh = field.mesh
    if not (3.0 * mesh.edge_target(r) < r < mesh.domain.delta_star):
        raise BelowResolution(
            f"circle radius {r:.3g} outside (mesh floor, delta*)"
        )
    vals = field.interpolate(_circle_points(mesh.domain, r))
    return float(np.max(vals) - np.min(vals))


def choose_anchor(field, delta):
    """Anchor point of median field value on the probe circle sqrt(delta) delta*."""
    if not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")
    domain = field.mesh.domain
    r = np.sqrt(delta) * domain.delta_star
    pts = _circle_points(domain, r)
    vals = field.interpolate(pts)
    return pts[np.argsort(vals, kind="stable")[len(vals) // 2]].copy()


def footprint_region(mesh, barriers, radius=None):
    """Mesh vertices inside every barrier footprint (and optionally B(O, radius))."""
    pts = mesh.vertices
    mask = np.ones(len(pts), dtype=bool)
    for b in barriers:
        mask &= in_footprint(b, pts)
    if radius is not None:
        mask &= np.hypot(pts[:, 0], pts[:, 1]) <= radius
    return pts[mask], mask


@dataclass
class SandwichReport:
    """Two-sided comparison b- < f < b+ on the near-corner region."""

    w: np.ndarray
    f_w: float
    p_delta: float
    delta: float
    radius: float
    region: np.ndarray
    margins_lower: np.ndarray   # f - b- per point
    margins_upper: np.ndarray   # b+ - f per point
    min_gap_lower: float
    min_gap_upper: float
    vacuous_band: bool

    @property
    def valid(self):
        return self.min_gap_lower > 0.0 and self.min_gap_upper > 0.0


def sandwich_check(field, family, barriers, w, delta):
    """Check b-(x) < f(x) < b+(x) near the corner.

    b+/-(x) = f(w) +/- p(delta) +/- h_mu^-/+ (x): the band center is the
    field value at the anchor w on the probe circle of radius
    sqrt(delta) delta*, the band half-width is p(delta) with M0 the graph
    area, and the torus sheets tighten the bound away from the corner
    (the lower sheet enters b+, the upper sheet enters b-).  Evaluated at
    every mesh vertex of B(O, sqrt(delta) delta*) that lies in the shared
    footprint.
    """
    mesh = field.mesh
    domain = mesh.domain
    if not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")
    radius = float(np.sqrt(delta) * domain.delta_star)

    w = np.asarray(w, dtype=float).reshape(2)
    rw = float(np.hypot(w[0], w[1]))
    if not (0.5 * radius <= rw <= 1.5 * radius):
        raise PreconditionsUnmet(
            f"anchor |w|={rw:.3g} not on the probe circle of radius {radius:.3g}"
        )
    contact = contact_inequality_check(barriers, domain, family.gamma2)
    if not contact["holds"]:
        raise PreconditionsUnmet(
            "contact inequalities fail on the minus wall; the comparison "
            "principle hypotheses are not met"
        )

    lower, upper = barriers
    if lower.sign > upper.sign:
        lower, upper = upper, lower
    region, mask = footprint_region(mesh, (lower, upper), radius)
    if len(region) < 10:
        raise BarrierFootprintMiss(
            f"only {len(region)} mesh vertices in B(O, {radius:.3g}) within "
            "the barrier footprint"
        )

    f_w = float(field.interpolate(w)[0])
    p = p_of_delta(graph_area(field), delta)
    f_vals = field.values[mask]
    h_lower = barrier_height(lower, region)   # <= 0 sheet
    h_upper = barrier_height(upper, region)   # >= 0 sheet
    b_plus = f_w + p + h_lower
    b_minus = f_w - p - h_upper
    margins_upper = b_plus - f_vals
    margins_lower = f_vals - b_minus
    M1 = float(np.max(np.abs(field.values)))
    return SandwichReport(
        w=w,
        f_w=f_w,
        p_delta=p,
        delta=float(delta),
        radius=radius,
        region=region,
        margins_lower=margins_lower,
        margins_upper=margins_upper,
        min_gap_lower=float(np.min(margins_lower)),
        min_gap_upper=float(np.min(margins_upper)),
        vacuous_band=bool(p >= 2.0 * M1),
    )


def uniform_continuity_probe(field, region, d):
    """Empirical modulus omega(d): max |f(x1) - f(x2)| over pairs with
    |x1 - x2| <= d in the region.

    region is an (n, 2) point array, a boolean vertex mask, or None for
    all mesh vertices.  The point set is thinned deterministically to at
    most 4000 points, so omega is exactly nondecreasing in d for a fixed
    region.
    """
    mesh = field.mesh
    if region is None:
        pts, vals = mesh.vertices, field.values
    else:
        region = np.asarray(region)
        if region.dtype == bool:
            pts, vals = mesh.vertices[region], field.values[region]
        else:
            pts = np.atleast_2d(region.astype(float))
            vals = field.interpolate(pts)
    if len(pts) > MAX_PROBE_POINTS:
        idx = np.unique(np.linspace(0, len(pts) - 1, MAX_PROBE_POINTS).astype(int))
        pts, vals = pts[idx], vals[idx]
    pairs = cKDTree(pts).query_pairs(float(d), output_type="ndarray")
    if len(pairs) == 0:
        return 0.0
    return float(np.max(np.abs(vals[pairs[:, 0]] - vals[pairs[:, 1]])))

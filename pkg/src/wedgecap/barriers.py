"""Toroidal comparison surfaces and their exact calculus.

The comparison torus has major radius R0 = 2 and minor radius r0 chosen
from the curvature bound M2 so that

    1/r0 - 1/(2 - r0) = M2            (r0 = 1 when M2 = 0).

The inner branch of the torus over the planar footprint

    Delta = { |x| >= r0,  0 <= x1 <= 2,  |x2| <= r0 }

is the graph of the two sheets

    h+-(x1, x2) = +- sqrt( rho(x2)^2 - (2 - x1)^2 ),
    rho(x2)     = 2 - sqrt(r0^2 - x2^2),

which vanish exactly on the quarter circle C = {|x| = r0, x1 >= 0}.
General frames compose with a rotation by -alpha about the origin and the
translation taking the anchor point r0 (cos beta, sin beta) on C to the
corner O:

    h+-_beta = h+-  o  T_beta^{-1}  o  R_alpha^{-1}.

The normalized gradient T h = grad h / sqrt(1 + |grad h|^2) simplifies to
the closed form

    T h+ = ( (2 - x1) s / (r0 rho),  x2 / r0 ),    s = sqrt(r0^2 - x2^2),

which is smooth across C, and its divergence

    div T h+ = (2 - 2 s) / (r0 (2 - s))

depends on x2 only, attains its minimum M2 on the centerline x2 = 0, and
equals -H_T(v) for the torus mean curvature H_T on the inner branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .conditions import check_theorem1
from .errors import (
    BadAngleOrder,
    BandTooNarrow,
    BetaOutOfRange,
    Condition1Violated,
    MuOutOfRange,
    NegativeCurvatureBound,
    OutsideFootprint,
    SingularPoint,
    WallNotInFootprint,
)
from .geometry import _normal_at_radius

__all__ = [
    "TorusBarrier",
    "MuFamily",
    "CurvatureAudit",
    "minor_radius",
    "make_barrier",
    "barrier_height",
    "barrier_gradient",
    "normalized_gradient",
    "torus_mean_curvature",
    "mean_curvature_audit",
    "beta_from_tau",
    "wall_contact_trace",
    "contact_inequality_check",
    "plus_wall_normals_check",
    "mu_family",
    "modulus_of_continuity",
    "in_footprint",
]

R0 = 2.0
FOOTPRINT_TOL = 1e-12


def minor_radius(M2):
    """Minor radius r0 of the comparison torus for curvature bound M2.

    Solves 1/r0 - 1/(2 - r0) = M2 on (0, 1]; the closed form
    1/M2 + 1 - sqrt((1/M2)^2 + 1) is evaluated in the cancellation-free
    arrangement 2 m / (m + 1 + hypot(m, 1)) with m = 1/M2.
    """
    if M2 < 0:
        raise NegativeCurvatureBound(f"M2 must be >= 0, got {M2}")
    if M2 == 0:
        return 1.0
    m = 1.0 / M2
    return 2.0 * m / (m + 1.0 + float(np.hypot(m, 1.0)))


@dataclass(frozen=True)
class TorusBarrier:
    """One sheet h+ or h- of the comparison torus in a rotated frame.

    sign : +1 selects the upper sheet h+, -1 the lower sheet h-.
    alpha : frame rotation angle (radians).
    beta : anchor angle on the zero circle C, in [-pi/2, pi/2].
    r0 : minor radius in (0, 1].
    """

    sign: int
    alpha: float = 0.0
    beta: float = 0.0
    r0: float = 1.0

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        if not (0.0 < self.r0 <= 1.0):
            raise ValueError(f"r0 must lie in (0, 1], got {self.r0}")
        if not (-np.pi / 2 - 1e-12 <= self.beta <= np.pi / 2 + 1e-12):
            raise BetaOutOfRange(f"beta={self.beta} outside [-pi/2, pi/2]")

    @property
    def anchor(self):
        return np.array([self.r0 * np.cos(self.beta), self.r0 * np.sin(self.beta)])


def make_barrier(sign, M2, alpha=0.0, beta=0.0):
    """Barrier with minor radius derived from the curvature bound M2."""
    return TorusBarrier(sign=sign, alpha=alpha, beta=beta, r0=minor_radius(M2))


def _rot(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def to_canonical(barrier, x):
    """Map physical points into the canonical footprint frame."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return x @ _rot(barrier.alpha).T + barrier.anchor


def from_canonical(barrier, y):
    y = np.atleast_2d(np.asarray(y, dtype=float))
    return (y - barrier.anchor) @ _rot(-barrier.alpha).T


def in_footprint(barrier, x, tol=FOOTPRINT_TOL):
    """Membership of physical points in the footprint Delta_beta."""
    y = to_canonical(barrier, x)
    return _in_delta(y, barrier.r0, tol)


def _in_delta(y, r0, tol=FOOTPRINT_TOL):
    rad = np.hypot(y[:, 0], y[:, 1])
    return (
        (rad >= r0 - tol)
        & (y[:, 0] >= -tol)
        & (y[:, 0] <= 2.0 + tol)
        & (np.abs(y[:, 1]) <= r0 + tol)
    )


def _sheet_canonical(y, r0, sign):
    s = np.sqrt(np.maximum(r0 * r0 - y[:, 1] ** 2, 0.0))
    rho = 2.0 - s
    return sign * np.sqrt(np.maximum(rho * rho - (2.0 - y[:, 0]) ** 2, 0.0))


def barrier_height(barrier, x):
    """Height of the barrier sheet over physical point(s) x.

    Raises OutsideFootprint if any point leaves Delta_beta.  The value is
    exactly zero on the image of the circle C.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    y = to_canonical(barrier, x)
    ok = _in_delta(y, barrier.r0)
    if not np.all(ok):
        bad = np.atleast_2d(x)[~ok][0]
        raise OutsideFootprint(f"point {tuple(bad)} outside the barrier footprint")
    vals = _sheet_canonical(y, barrier.r0, barrier.sign)
    return float(vals[0]) if scalar else vals


def barrier_gradient(barrier, x, singular_tol=1e-9):
    """Analytic gradient of the barrier sheet at interior points.

    The gradient blows up on the zero circle C (vertical tangent plane);
    points within ``singular_tol`` of it raise SingularPoint.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    y = to_canonical(barrier, x)
    r0 = barrier.r0
    ok = _in_delta(y, r0)
    if not np.all(ok):
        bad = np.atleast_2d(x)[~ok][0]
        raise OutsideFootprint(f"point {tuple(bad)} outside the barrier footprint")
    rad = np.hypot(y[:, 0], y[:, 1])
    if np.any(rad <= r0 + singular_tol):
        raise SingularPoint("gradient is unbounded on the zero circle")
    if np.any(np.abs(y[:, 1]) >= r0 - singular_tol):
        raise OutsideFootprint("point on the lateral footprint edge x2 = +-r0")
    s = np.sqrt(r0 * r0 - y[:, 1] ** 2)
    rho = 2.0 - s
    h = np.sqrt(rho * rho - (2.0 - y[:, 0]) ** 2)
    g = np.stack([(2.0 - y[:, 0]) / h, rho * y[:, 1] / (h * s)], axis=1)
    g *= barrier.sign
    out = g @ _rot(-barrier.alpha).T
    return out[0] if scalar else out


def _T_canonical(y, r0, sign):
    # exact normalized gradient of the sheet; smooth across C
    s = np.sqrt(np.maximum(r0 * r0 - y[:, 1] ** 2, 0.0))
    rho = 2.0 - s
    t1 = (2.0 - y[:, 0]) * s / (r0 * rho)
    t2 = y[:, 1] / r0
    return sign * np.stack([t1, t2], axis=1)


def normalized_gradient(barrier, x):
    """Exact field T h = grad h / sqrt(1 + |grad h|^2) at physical points.

    Unlike the raw gradient this is smooth across the zero circle, where
    it becomes the unit horizontal vector of the vertical tangent plane.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    y = to_canonical(barrier, x)
    ok = _in_delta(y, barrier.r0)
    if not np.all(ok):
        bad = np.atleast_2d(x)[~ok][0]
        raise OutsideFootprint(f"point {tuple(bad)} outside the barrier footprint")
    t = _T_canonical(y, barrier.r0, barrier.sign) @ _rot(-barrier.alpha).T
    return t[0] if scalar else t


def torus_mean_curvature(x2, r0):
    """Mean curvature H_T on the inner branch as a function of x2.

    cos v = -sqrt(r0^2 - x2^2)/r0 on the inner branch, and
    H_T(v) = -(2 + 2 r0 cos v) / (r0 (2 + r0 cos v)).
    """
    x2 = np.asarray(x2, dtype=float)
    cv = -np.sqrt(np.maximum(r0 * r0 - x2 * x2, 0.0)) / r0
    return -(2.0 + 2.0 * r0 * cv) / (r0 * (2.0 + r0 * cv))


@dataclass
class CurvatureAudit:
    """Pointwise divergence audit of the normalized gradient field."""

    barrier: TorusBarrier
    points: np.ndarray       # canonical (n, 2)
    div_T: np.ndarray
    H_T: np.ndarray          # torus mean curvature at the same points
    min_div: float
    max_div: float
    max_dev: float           # max |div_T + sign * H_T|

    def rows(self):
        """CSV-ready rows (x1, x2, divT, H_T)."""
        return np.column_stack([self.points, self.div_T, self.H_T])


def mean_curvature_audit(barrier, grid=120, eps_band=None, fd_step=1e-6):
    """Certify the curvature bound of the sheet by numeric divergence.

    Central differences of the exact T field are evaluated on a grid of
    interior footprint points excluding a band of width ``eps_band``
    around the zero circle.  For the upper sheet the divergence must stay
    >= M2; for the lower sheet <= -M2.

    Parameters
    ----------
    barrier : TorusBarrier
    grid : int or ndarray
        Grid resolution per axis, or explicit canonical points (n, 2).
    eps_band : float
        Band excluded around the zero circle; default 1e-3 * r0.
    fd_step : float
        Central-difference step.

    Returns
    -------
    CurvatureAudit
    """
    r0 = barrier.r0
    if eps_band is None:
        eps_band = 1e-3 * r0
    if eps_band < 10 * fd_step:
        raise BandTooNarrow(
            f"eps_band={eps_band} too small for fd_step={fd_step}; "
            "numeric differentiation would straddle the singularity"
        )
    if isinstance(grid, (int, np.integer)):
        n = int(grid)
        margin = 5e-3 * r0
        pts = []
        for x2 in np.linspace(-r0 + margin, r0 - margin, n):
            lo = float(np.sqrt(r0 * r0 - x2 * x2)) + eps_band
            hi = 2.0 - fd_step
            if hi <= lo:
                continue
            x1 = np.linspace(lo, hi, n)
            pts.append(np.column_stack([x1, np.full_like(x1, x2)]))
        pts = np.concatenate(pts)
    else:
        pts = np.atleast_2d(np.asarray(grid, dtype=float))
        rad = np.hypot(pts[:, 0], pts[:, 1])
        if np.any(rad < r0 + eps_band - FOOTPRINT_TOL):
            raise OutsideFootprint("audit points must avoid the exclusion band")

    sign = barrier.sign

    def T(q):
        return _T_canonical(q, r0, sign)

    e1 = np.array([fd_step, 0.0])
    e2 = np.array([0.0, fd_step])
    div = (
        (T(pts + e1)[:, 0] - T(pts - e1)[:, 0])
        + (T(pts + e2)[:, 1] - T(pts - e2)[:, 1])
    ) / (2 * fd_step)
    HT = torus_mean_curvature(pts[:, 1], r0)
    dev = float(np.max(np.abs(div + sign * HT)))
    return CurvatureAudit(
        barrier=barrier,
        points=pts,
        div_T=div,
        H_T=HT,
        min_div=float(div.min()),
        max_div=float(div.max()),
        max_dev=dev,
    )


def beta_from_tau(which, tau):
    """Anchor angle from a tangent-ray angle.

    which = 1: beta = pi/2 - tau (lower-sheet convention);
    which = 2: beta = tau - pi/2 (upper-sheet convention).
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if not (0.0 < tau < np.pi):
        raise BetaOutOfRange(f"tau={tau} outside (0, pi) maps beta outside range")
    return np.pi / 2 - tau if which == 1 else tau - np.pi / 2


def wall_contact_trace(barrier, wall="minus", samples=50):
    """Trace of T h . nu along the straight wall through the corner.

    The wedge wall theta = -alpha maps to the horizontal segment
    (t + r0 cos beta, r0 sin beta) in the canonical frame with the pulled
    back normal (0, -1), so the trace equals cos(tau) identically by the
    rotational symmetry of the torus about its axis.

    Parameters
    ----------
    barrier : TorusBarrier
    wall : {"minus"} or "SideMinus"
        The wall theta = -alpha; the plus wall has no constant trace and
        is handled by plus_wall_normals_check instead.
    samples : int or array
        Sample count (spread over the valid span) or explicit distances
        from the corner along the wall.

    Returns
    -------
    ndarray of trace values.
    """
    if wall not in ("minus", "SideMinus"):
        raise WallNotInFootprint(f"trace is defined on the minus wall, got {wall!r}")
    r0, beta = barrier.r0, barrier.beta
    t_max = 2.0 - r0  # conservative span valid for every beta
    if isinstance(samples, (int, np.integer)):
        margin = 1e-3 * t_max
        t = np.linspace(margin, t_max - margin, int(samples))
    else:
        t = np.asarray(samples, dtype=float)
        if np.any(t <= 0) or np.any(t >= 2.0 - r0 * np.cos(beta)):
            raise WallNotInFootprint("wall samples leave the footprint span")
    y = np.column_stack([t + r0 * np.cos(beta), np.full_like(t, r0 * np.sin(beta))])
    tt = _T_canonical(y, r0, barrier.sign)
    return -tt[:, 1]


def contact_inequality_check(barriers, domain, gamma2, side="minus",
                             delta_probe=0.5, n=200):
    """Check the contact inequalities on the minus wall near the corner.

    For the pair (h-_beta1, h+_beta2) the sandwich construction needs

        T(h-_beta1) . nu > cos gamma    and    T(h+_beta2) . nu < cos gamma

    on the wall with |x| < delta1.  Returns the largest such delta1 up to
    ``delta_probe`` together with the worst margins observed.

    Parameters
    ----------
    barriers : (TorusBarrier, TorusBarrier)
        Lower sheet with beta1 = pi/2 - tau1, upper sheet with
        beta2 = tau2 - pi/2, both in the frame of ``domain``.
    domain : WedgeDomain
    gamma2 : float
        Limiting contact angle on the minus wall.
    """
    lower = next((b for b in barriers if b.sign == -1), None)
    upper = next((b for b in barriers if b.sign == +1), None)
    if lower is None or upper is None:
        raise ValueError("barriers must contain one lower and one upper sheet")
    tau1 = np.pi / 2 - lower.beta
    tau2 = upper.beta + np.pi / 2
    if not (tau1 < gamma2 < tau2):
        raise BadAngleOrder(
            f"need tau1 < gamma2 < tau2, got {tau1:.6f}, {gamma2:.6f}, {tau2:.6f}"
        )
    if side not in ("minus", "SideMinus"):
        raise ValueError("contact inequalities are checked on the minus wall")

    radii = np.linspace(delta_probe / n, delta_probe, n)
    pts = domain.wall_point("minus", radii)
    cg = np.cos(gamma2)
    ok = np.empty(n, dtype=bool)
    margin_lo = np.empty(n)
    margin_hi = np.empty(n)
    for k, (r, x) in enumerate(zip(radii, pts)):
        nu = _normal_at_radius(domain, "minus", float(r))
        good = True
        for b, is_lower in ((lower, True), (upper, False)):
            y = to_canonical(b, x)
            if not _in_delta(y, b.r0)[0]:
                good = False
                continue
            val = float(
                (_T_canonical(y, b.r0, b.sign) @ _rot(-b.alpha).T)[0] @ nu
            )
            if is_lower:
                margin_lo[k] = val - cg
                good &= val > cg
            else:
                margin_hi[k] = cg - val
                good &= val < cg
        ok[k] = good
    if not ok[0]:
        delta1 = 0.0
    else:
        bad = np.nonzero(~ok)[0]
        delta1 = float(radii[bad[0]]) if len(bad) else float(delta_probe)
    return {
        "holds": delta1 > 0.0,
        "delta1": delta1,
        "min_margin_lower": float(margin_lo.min()),
        "min_margin_upper": float(margin_hi.min()),
    }


def plus_wall_normals_check(tau1, tau2, alpha, lambda1, lambda2):
    """Case split certifying the plus-wall contact inequalities.

    h_minus_ok: either tau1 + 2 alpha > pi (the lambda1 bound is
    irrelevant) or -cos(tau1 + 2 alpha) > cos(lambda1).
    h_plus_ok: either tau2 < 2 alpha or -cos(tau2 - 2 alpha) < cos(lambda2).
    """
    h_minus_ok = (tau1 + 2 * alpha > np.pi) or (
        -np.cos(tau1 + 2 * alpha) > np.cos(lambda1)
    )
    h_plus_ok = (tau2 < 2 * alpha) or (-np.cos(tau2 - 2 * alpha) < np.cos(lambda2))
    return {"h_minus_ok": bool(h_minus_ok), "h_plus_ok": bool(h_plus_ok)}


@dataclass(frozen=True)
class MuFamily:
    """One-parameter family of matched comparison frames.

    tau1 = pi - 2 alpha + mu and tau2 = 2 alpha - mu make the two anchor
    angles coincide at beta = 2 alpha - mu - pi/2, so both sheets share
    the footprint Delta_mu.  theta_mu = alpha - mu is the tangent-ray
    direction of the anchored circle at the corner.
    """

    alpha: float
    gamma2: float
    mu: float
    tau1: float
    tau2: float
    beta: float
    theta_mu: float
    R_mu: float
    r0: float


def mu_family(alpha, gamma2, mu, M2=0.0, bisect_tol=1e-10):
    """Construct the matched barrier frame family for parameter mu.

    Requires the admissibility condition pi - 2 alpha < gamma2 < 2 alpha
    with alpha in (pi/4, pi/2], and mu strictly inside
    (0, min{gamma2 - (pi - 2 alpha), 2 alpha - gamma2}).

    R_mu is the largest radius R such that B(O, R) intersected with the
    straight wedge stays inside the box part {0 <= y1 <= 2, |y2| <= r0}
    of the footprint, found by bisection.  (Membership relative to the
    anchored circle itself is direction-dependent at every radius and is
    handled pointwise by the sandwich region test.)
    """
    rep = check_theorem1(alpha, gamma2)
    if rep.holds is not True:
        raise Condition1Violated(
            f"admissibility fails for alpha={alpha}, gamma2={gamma2}"
        )
    hi = min(gamma2 - (np.pi - 2 * alpha), 2 * alpha - gamma2)
    if not (0.0 < mu < hi):
        raise MuOutOfRange(f"mu must lie in (0, {hi:.6g}), got {mu}")
    tau1 = np.pi - 2 * alpha + mu
    tau2 = 2 * alpha - mu
    beta1 = beta_from_tau(1, tau1)
    beta2 = beta_from_tau(2, tau2)
    assert abs(beta1 - beta2) <= 1e-14
    r0 = minor_radius(M2)
    anchor = np.array([r0 * np.cos(beta1), r0 * np.sin(beta1)])

    def inside_box(R):
        th = np.linspace(-alpha, alpha, 720)
        y = (np.column_stack([R * np.cos(th), R * np.sin(th)])
             @ _rot(alpha).T + anchor)
        return bool(
            np.all(y[:, 0] >= 0)
            and np.all(y[:, 0] <= 2.0)
            and np.all(np.abs(y[:, 1]) <= r0)
        )

    lo, hi_R = 0.0, 4.0
    if inside_box(hi_R):
        R_mu = hi_R
    else:
        while hi_R - lo > bisect_tol:
            mid = 0.5 * (lo + hi_R)
            if inside_box(mid):
                lo = mid
            else:
                hi_R = mid
        R_mu = lo
    return MuFamily(
        alpha=float(alpha),
        gamma2=float(gamma2),
        mu=float(mu),
        tau1=float(tau1),
        tau2=float(tau2),
        beta=float(beta1),
        theta_mu=float(alpha - mu),
        R_mu=float(R_mu),
        r0=float(r0),
    )


def barrier_pair(family):
    """The (lower, upper) sheets sharing the family's frame."""
    lower = TorusBarrier(sign=-1, alpha=family.alpha, beta=family.beta, r0=family.r0)
    upper = TorusBarrier(sign=+1, alpha=family.alpha, beta=family.beta, r0=family.r0)
    return lower, upper


@lru_cache(maxsize=8)
def _q_table(r0_key, grid_n, n_dirs_cap):
    r0 = float(r0_key)
    nx = grid_n
    dx = 2.0 / (nx - 1)
    ny = max(int(round(2 * r0 / dx)) + 1, 3)
    dy = 2 * r0 / (ny - 1)
    x1 = np.linspace(0.0, 2.0, nx)
    x2 = np.linspace(-r0, r0, ny)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    mask = np.hypot(X1, X2) >= r0 - 1e-12
    S = np.sqrt(np.maximum(r0 * r0 - X2 * X2, 0.0))
    RHO = 2.0 - S
    H = -np.sqrt(np.maximum(RHO * RHO - (2.0 - X1) ** 2, 0.0))
    H[~mask] = np.nan

    # primitive integer directions, half plane, gcd-reduced
    prims = []
    lim = 6
    for di in range(-lim, lim + 1):
        for dj in range(0, lim + 1):
            if di == 0 and dj == 0:
                continue
            if dj == 0 and di < 0:
                continue
            if np.gcd(abs(di), dj) == 1:
                prims.append((di, dj))

    dists, diffs = [0.0], [0.0]
    for di, dj in prims:
        kmax = min(
            (nx - 1) // abs(di) if di else 10**9,
            (ny - 1) // dj if dj else 10**9,
        )
        for k in range(1, kmax + 1):
            oi, oj = k * di, k * dj
            if oi >= 0:
                a = H[oi:, oj:] if oj else H[oi:, :]
                b = H[: nx - oi, : ny - oj] if oj else H[: nx - oi, :]
            else:
                a = H[: nx + oi, oj:]
                b = H[-oi:, : ny - oj]
            with np.errstate(invalid="ignore"):
                d = np.abs(a - b)
            m = np.nanmax(d) if np.any(~np.isnan(d)) else np.nan
            if not np.isnan(m):
                dists.append(float(np.hypot(oi * dx, oj * dy)))
                diffs.append(float(m))
    order = np.argsort(dists)
    dists = np.asarray(dists)[order]
    diffs = np.maximum.accumulate(np.asarray(diffs)[order])
    return dists, diffs


def modulus_of_continuity(r0, s, grid_n=192):
    """Numeric modulus of continuity q(s) of the lower sheet on Delta.

    q(s) = max |h-(x) - h-(y)| over grid pairs with |x - y| <= s,
    evaluated along 60+ lattice directions with a cumulative maximum in
    the pair distance, which makes q nondecreasing by construction.
    q(0) = 0; q saturates at the full height range 2 once s reaches the
    distance from the lateral-edge deep points (2, +-r0) to the zero
    circle (the sheet attains -2 there, not -(2 - r0) as on the
    centerline).
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0:
        return 0.0
    if not (0.0 < r0 <= 1.0):
        raise ValueError(f"r0 must lie in (0, 1], got {r0}")
    dists, diffs = _q_table(round(float(r0), 15), grid_n, 64)
    idx = np.searchsorted(dists, s, side="right") - 1
    return float(diffs[int(np.clip(idx, 0, len(diffs) - 1))])

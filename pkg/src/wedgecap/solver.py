"""Finite-element solver for the prescribed mean curvature equation.

Solves div(T f) = 2 H(x, f) with T f = grad f / sqrt(1 + |grad f|^2) on a
wedge mesh, with per-tag boundary conditions that are either capillary
(T f . nu = cos gamma) or Dirichlet.  Discretization uses conforming
piecewise-linear elements, so T f is elementwise constant and the
nonlinear assembly is exact per triangle; the H term uses vertex
quadrature.  The discrete weak residual is

    R(f)[phi] = int T f . grad phi + int 2 H(x, f) phi
                - sum over capillary edges of cos(gamma) phi ds,

driven to tol_newton by damped Newton with residual backtracking.  The
per-triangle Jacobian of T is (I - p p^T / W^2) / W with p = grad f and
W = sqrt(1 + |p|^2), which is symmetric positive definite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.spatial import cKDTree

from .errors import IllPosed, LineSearchStalled, NoConvergence

__all__ = [
    "MeanCurvatureSpec",
    "constant_H",
    "spatial_H",
    "linear_H",
    "Capillary",
    "Dirichlet",
    "BoundarySpec",
    "SolverOptions",
    "ScalarField",
    "solve",
    "graph_area",
    "empirical_bounds",
    "energy",
    "capillary_flux_defect",
    "unbounded_corner_probe",
]

TAGS = ("SidePlus", "SideMinus", "OuterArc")


@dataclass(frozen=True)
class MeanCurvatureSpec:
    """Prescribed mean curvature H(x, t).

    variant: "constant" (H0), "spatial" (H(x)), or "linear"
    (kappa * t + H0 with kappa >= 0, monotone in t).
    """

    variant: str
    H0: float = 0.0
    kappa: float = 0.0
    func: object = None  # spatial variant: callable (n,2) -> (n,)

    def __post_init__(self):
        if self.variant not in ("constant", "spatial", "linear"):
            raise ValueError(f"unknown H variant {self.variant!r}")
        if self.variant == "linear" and self.kappa < 0:
            raise ValueError("linear variant requires kappa >= 0")
        if self.variant == "spatial" and not callable(self.func):
            raise ValueError("spatial variant requires a callable H(x)")

    def __call__(self, x, t):
        t = np.asarray(t, dtype=float)
        if self.variant == "constant":
            return np.full_like(t, self.H0)
        if self.variant == "linear":
            return self.kappa * t + self.H0
        return np.asarray(self.func(np.atleast_2d(x)), dtype=float).reshape(t.shape)

    def dt(self, x, t):
        t = np.asarray(t, dtype=float)
        if self.variant == "linear":
            return np.full_like(t, self.kappa)
        return np.zeros_like(t)

    def potential(self, x, t):
        """Phi(x, t) with dPhi/dt = 2 H(x, t), used by the energy."""
        t = np.asarray(t, dtype=float)
        if self.variant == "constant":
            return 2.0 * self.H0 * t
        if self.variant == "linear":
            return self.kappa * t * t + 2.0 * self.H0 * t
        h = np.asarray(self.func(np.atleast_2d(x)), dtype=float).reshape(t.shape)
        return 2.0 * h * t


def constant_H(H0):
    return MeanCurvatureSpec("constant", H0=float(H0))


def spatial_H(func):
    return MeanCurvatureSpec("spatial", func=func)


def linear_H(kappa, H0=0.0):
    return MeanCurvatureSpec("linear", kappa=float(kappa), H0=float(H0))


@dataclass(frozen=True)
class Capillary:
    """Contact-angle condition T f . nu = cos gamma.

    gamma is a constant in [0, pi] or a callable of arclength along the
    tagged boundary piece (measured from the corner on the side walls and
    from the minus end on the outer arc).
    """

    gamma: object = np.pi / 2

    def gamma_at(self, s):
        s = np.asarray(s, dtype=float)
        g = self.gamma(s) if callable(self.gamma) else np.full_like(s, self.gamma)
        g = np.asarray(g, dtype=float)
        if np.any(g < -1e-12) or np.any(g > np.pi + 1e-12):
            raise ValueError("contact angle gamma must lie in [0, pi]")
        return g


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed boundary values; phi is a constant or callable of (n,2)."""

    phi: object = 0.0

    def phi_at(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if callable(self.phi):
            return np.asarray(self.phi(points), dtype=float).reshape(len(points))
        return np.full(len(points), float(self.phi))


@dataclass(frozen=True)
class BoundarySpec:
    """Per-tag boundary conditions for SidePlus, SideMinus, OuterArc."""

    side_plus: object = None
    side_minus: object = None
    outer_arc: object = None

    def by_tag(self):
        return {
            "SidePlus": self.side_plus,
            "SideMinus": self.side_minus,
            "OuterArc": self.outer_arc,
        }

    def has_dirichlet(self):
        return any(isinstance(bc, Dirichlet) for bc in self.by_tag().values())


@dataclass(frozen=True)
class SolverOptions:
    tol_newton: float = 1e-10
    max_iter: int = 100
    damping: float = 1.0          # initial step scale
    min_step: float = 2.0 ** -20
    continuation: bool = True     # fall back to load continuation


@dataclass
class ScalarField:
    """Discrete solution with solver diagnostics."""

    mesh: object
    values: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    _tree: object = field(default=None, repr=False, compare=False)

    def sup_abs(self):
        return float(np.max(np.abs(self.values)))

    def triangle_gradients(self):
        area, G = _p1_geometry(self.mesh.vertices, self.mesh.triangles)
        return np.einsum("ti,tid->td", self.values[self.mesh.triangles], G)

    def interpolate(self, points):
        """Barycentric interpolation at interior points."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        p, t = self.mesh.vertices, self.mesh.triangles
        if self._tree is None:
            cents = p[t].mean(axis=1)
            object.__setattr__(self, "_tree", (cKDTree(cents), cents))
        tree, _ = self._tree
        k = min(24, len(t))
        _, cand = tree.query(points, k=k)
        cand = np.atleast_2d(cand)
        out = np.empty(len(points))
        a = p[t[:, 0]]
        e1 = p[t[:, 1]] - a
        e2 = p[t[:, 2]] - a
        det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        for i, x in enumerate(points):
            found = False
            for tj in cand[i]:
                d = x - a[tj]
                l1 = (d[0] * e2[tj, 1] - d[1] * e2[tj, 0]) / det[tj]
                l2 = (e1[tj, 0] * d[1] - e1[tj, 1] * d[0]) / det[tj]
                if l1 >= -1e-10 and l2 >= -1e-10 and l1 + l2 <= 1 + 1e-10:
                    vi = t[tj]
                    out[i] = (
                        (1 - l1 - l2) * self.values[vi[0]]
                        + l1 * self.values[vi[1]]
                        + l2 * self.values[vi[2]]
                    )
                    found = True
                    break
            if not found:
                # rare fallback: nearest vertex of nearest candidate
                vi = t[cand[i][0]]
                j = vi[np.argmin(np.linalg.norm(p[vi] - x, axis=1))]
                out[i] = self.values[j]
        return out


def _p1_geometry(p, t):
    a, b, c = p[t[:, 0]], p[t[:, 1]], p[t[:, 2]]
    det = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
        c[:, 0] - a[:, 0]
    )
    area = 0.5 * det

    def hatgrad(pi, pj, pk):
        e = pk - pj
        n = np.stack([-e[:, 1], e[:, 0]], axis=1)
        s = np.sum((pi - pj) * n, axis=1)
        return n / s[:, None]

    G = np.stack([hatgrad(a, b, c), hatgrad(b, c, a), hatgrad(c, a, b)], axis=1)
    return area, G


def _boundary_arclengths(mesh):
    """Cumulative chord arclength per boundary vertex, keyed by tag."""
    out = {}
    for tag, chain in (
        ("SidePlus", mesh.side_plus_chain[::-1]),   # corner -> outer
        ("SideMinus", mesh.side_minus_chain[::-1]),
    ):
        pts = mesh.vertices[chain]
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        out[tag] = dict(zip(chain.tolist(), np.concatenate([[0.0], np.cumsum(seg)])))
    arc = mesh.outer_arc_idx
    pts = mesh.vertices[arc]
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    out["OuterArc"] = dict(zip(arc.tolist(), np.concatenate([[0.0], np.cumsum(seg)])))
    return out


def _dirichlet_data(mesh, bspec):
    """Dirichlet vertex indices and values; OuterArc takes precedence."""
    tagged = bspec.by_tag()
    order = ("SidePlus", "SideMinus", "OuterArc")
    chain = {
        "SidePlus": mesh.side_plus_chain,
        "SideMinus": mesh.side_minus_chain,
        "OuterArc": mesh.outer_arc_idx,
    }
    seen = {}
    for tag in order:
        bc = tagged[tag]
        if isinstance(bc, Dirichlet):
            vv = bc.phi_at(mesh.vertices[chain[tag]])
            for i, v in zip(chain[tag].tolist(), vv):
                seen[i] = v
    if seen:
        idx = np.fromiter(seen.keys(), dtype=np.int64)
        val = np.fromiter(seen.values(), dtype=float)
        order_ = np.argsort(idx)
        return idx[order_], val[order_]
    return np.empty(0, dtype=np.int64), np.empty(0)


def _capillary_load(mesh, bspec, scale=1.0, target=None):
    """Assemble the boundary load sum cos(gamma) phi_i over capillary edges.

    scale blends gamma toward pi/2 for continuation:
    gamma_eff = pi/2 + scale * (gamma - pi/2).
    """
    nv = len(mesh.vertices)
    load = np.zeros(nv) if target is None else target
    load[:] = 0.0
    arcl = _boundary_arclengths(mesh)
    tagged = bspec.by_tag()
    for (i, j), tag in zip(mesh.boundary_edges, mesh.boundary_tags):
        bc = tagged[tag]
        if not isinstance(bc, Capillary):
            continue
        s_mid = 0.5 * (arcl[tag][int(i)] + arcl[tag][int(j)])
        g = float(bc.gamma_at(s_mid))
        g = np.pi / 2 + scale * (g - np.pi / 2)
        w = 0.5 * np.cos(g) * float(
            np.linalg.norm(mesh.vertices[int(i)] - mesh.vertices[int(j)])
        )
        load[int(i)] += w
        load[int(j)] += w
    return load


class _Assembler:
    """Assembles residual and Jacobian at load fraction t in [0, 1].

    The homotopy scales the Dirichlet values, the capillary load and the
    curvature term together, so t walks from the harmonic problem with
    neutral boundary data to the full nonlinear one.
    """

    def __init__(self, mesh, hspec, bspec):
        self.mesh = mesh
        self.hspec = hspec
        self.bspec = bspec
        self.area, self.G = _p1_geometry(mesh.vertices, mesh.triangles)
        t = mesh.triangles
        self.rows = np.repeat(t, 3, axis=1).ravel()
        self.cols = np.tile(t, (1, 3)).ravel()
        self.lump = np.zeros(len(mesh.vertices))
        np.add.at(self.lump, t.ravel(), np.repeat(self.area / 3.0, 3))
        self.tri_pts = mesh.vertices[t].reshape(-1, 2)
        self.cap_unit = _capillary_load(mesh, bspec, scale=1.0)
        self.d_idx, self.d_val = _dirichlet_data(mesh, bspec)
        self.free = np.setdiff1d(np.arange(len(mesh.vertices)), self.d_idx)

    def residual(self, f, t_load):
        t = self.mesh.triangles
        grad = np.einsum("ti,tid->td", f[t], self.G)
        # overflow to inf is fine: diverging trial steps get rejected by
        # the line search on the (then infinite) energy
        with np.errstate(over="ignore", invalid="ignore"):
            W = np.sqrt(1.0 + np.sum(grad * grad, axis=1))
            T = grad / W[:, None]
        R = np.zeros(len(f))
        Rt = np.einsum("td,tid->ti", T, self.G) * self.area[:, None]
        np.add.at(R, t.ravel(), Rt.ravel())
        Hv = 2.0 * self.hspec(self.tri_pts, f[t].ravel()).reshape(-1, 3)
        np.add.at(R, t.ravel(), (t_load * self.area[:, None] / 3.0 * Hv).ravel())
        return R - t_load * self.cap_unit, T, W

    def jacobian(self, f, T, W, t_load):
        t = self.mesh.triangles
        A = (np.eye(2)[None] - np.einsum("td,te->tde", T, T)) / W[:, None, None]
        K = np.einsum("tid,tde,tje->tij", self.G, A, self.G) * self.area[
            :, None, None
        ]
        J = sp.coo_matrix(
            (K.ravel(), (self.rows, self.cols)),
            shape=(len(f), len(f)),
        ).tocsr()
        dH = self.hspec.dt(self.mesh.vertices, f)
        return J + sp.diags(t_load * 2.0 * self.lump * dH)

    def energy(self, f, t_load):
        """Discrete energy whose gradient on free nodes is the residual.

        The t-derivative of the curvature potential and the capillary
        work are both scaled by the load fraction.  Well defined (and
        convex in f) for every supported curvature variant.
        """
        t = self.mesh.triangles
        with np.errstate(over="ignore", invalid="ignore"):
            grad = np.einsum("ti,tid->td", f[t], self.G)
            W = np.sqrt(1.0 + np.sum(grad * grad, axis=1))
            J = float(np.sum(self.area * W))
            Phi = self.hspec.potential(
                self.tri_pts, f[t].ravel()).reshape(-1, 3)
            J += t_load * float(np.sum(self.area / 3.0 * Phi.sum(axis=1)))
            J -= t_load * float(self.cap_unit @ f)
        return J


def energy(mesh, hspec, bspec, f, gamma_scale=1.0):
    """Variational energy J(f) = area + potential - capillary work."""
    area, G = _p1_geometry(mesh.vertices, mesh.triangles)
    t = mesh.triangles
    grad = np.einsum("ti,tid->td", f[t], G)
    W = np.sqrt(1.0 + np.sum(grad * grad, axis=1))
    J = float(np.sum(area * W))
    tri_pts = mesh.vertices[t].reshape(-1, 2)
    Phi = hspec.potential(tri_pts, f[t].ravel()).reshape(-1, 3)
    J += float(np.sum(area / 3.0 * Phi.sum(axis=1)))
    load = _capillary_load(mesh, bspec, scale=gamma_scale)
    J -= float(load @ f)
    return J


def _newton(asm, hspec, bspec, f0, opts, t_load):
    free = asm.free
    f = f0.copy()
    f[asm.d_idx] = t_load * asm.d_val

    variational = hspec.variant in ("constant", "linear", "spatial")
    res_hist, damp_hist, en_hist = [], [], []
    best_f, best_res = f.copy(), np.inf
    for it in range(opts.max_iter):
        R, T, W = asm.residual(f, t_load)
        res = float(np.linalg.norm(R[free]))
        res_hist.append(res)
        if res < best_res:
            best_res, best_f = res, f.copy()
        if variational and t_load == 1.0:
            en_hist.append(asm.energy(f, 1.0))
        if res < opts.tol_newton:
            return f, {
                "residual_norm": res,
                "newton_iters": it,
                "residual_history": res_hist,
                "damping_history": damp_hist,
                "energy_history": en_hist,
                "converged": True,
            }
        def fail(reason):
            return best_f, {
                "residual_norm": best_res,
                "newton_iters": it,
                "residual_history": res_hist,
                "damping_history": damp_hist,
                "energy_history": en_hist,
                "converged": False,
                "stalled": reason,
                "f_last": f.copy(),
            }

        J = asm.jacobian(f, T, W, t_load)
        Jff = J[free][:, free].tocsc()
        try:
            step = spla.spsolve(Jff, -R[free])
        except RuntimeError as exc:
            return fail(f"linear solve failed at iter {it}: {exc}")
        if not np.all(np.isfinite(step)):
            return fail(f"Newton step not finite at iter {it}")
        # The energy is convex and the residual is its gradient, so the
        # Newton step is a descent direction; Armijo on the energy plus a
        # residual-decrease escape (for when energy differences fall
        # below roundoff) gives global convergence.  The escape must not
        # admit energy increases beyond roundoff: a step can shrink the
        # residual norm while blowing up the graph area in near-corner
        # cells, poisoning every later iterate.
        J0 = asm.energy(f, t_load)
        J_slack = J0 + 1e-8 * max(1.0, abs(J0))
        slope = float(R[free] @ step)
        lam = opts.damping
        accepted = False
        while lam >= opts.min_step:
            fn = f.copy()
            fn[free] += lam * step
            Jn = asm.energy(fn, t_load)
            if Jn <= J0 + 1e-4 * lam * slope:
                f = fn
                damp_hist.append(lam)
                accepted = True
                break
            if Jn <= J_slack:
                Rn, _, _ = asm.residual(fn, t_load)
                if np.linalg.norm(Rn[free]) < (1.0 - 0.25 * lam) * res:
                    f = fn
                    damp_hist.append(lam)
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            return fail(f"no acceptable step above {opts.min_step} at "
                        f"iter {it} (residual {res:.3e})")
    return best_f, {
        "residual_norm": best_res,
        "newton_iters": opts.max_iter,
        "residual_history": res_hist,
        "damping_history": damp_hist,
        "energy_history": en_hist,
        "converged": False,
        "f_last": f.copy(),
    }


def solve(domain, mesh, hspec, bspec, options=None):
    """Solve the prescribed mean curvature problem on the mesh.

    Parameters
    ----------
    domain : WedgeDomain
    mesh : Mesh
    hspec : MeanCurvatureSpec
    bspec : BoundarySpec
    options : SolverOptions

    Returns
    -------
    ScalarField

    Raises
    ------
    IllPosed
        If no tag is Dirichlet and the curvature has no increasing part.
    NoConvergence
        Newton failed even with load continuation; the exception carries
        the best iterate and diagnostics.
    """
    opts = options or SolverOptions()
    if not bspec.has_dirichlet() and not (
        hspec.variant == "linear" and hspec.kappa > 0
    ):
        raise IllPosed(
            "need at least one Dirichlet tag or a strictly increasing "
            "curvature term for well-posedness"
        )

    asm = _Assembler(mesh, hspec, bspec)
    f0 = np.zeros(len(mesh.vertices))

    f, failure = _newton(asm, hspec, bspec, f0, opts, t_load=1.0)
    if failure["converged"]:
        return ScalarField(mesh=mesh, values=f, diagnostics=failure)
    f_last = failure.pop("f_last", f)

    if opts.continuation:
        # walk the boundary data and curvature load up from a fraction
        # where Newton is safe, warm-starting each leg; on a failed leg,
        # bisect the load increment
        f_warm, t_done, dt = f0.copy(), 0.0, 0.25
        legs = 0
        while t_done < 1.0 and dt >= 1.0 / 64.0 and legs < 60:
            t_try = min(1.0, t_done + dt)
            f_new, diag = _newton(asm, hspec, bspec, f_warm, opts, t_try)
            legs += 1
            if diag["converged"]:
                f_warm, t_done = f_new, t_try
                if dt < 0.25:
                    dt *= 2.0
            else:
                dt *= 0.5
        if t_done == 1.0:
            diag["load_continuation"] = True
            diag["continuation_legs"] = legs
            return ScalarField(mesh=mesh, values=f_warm, diagnostics=diag)
        failure["continuation_stalled_at"] = t_done
        f_last = f_warm

    # near-corner sups: of the best (smallest-residual) iterate and of the
    # last iterate visited; a diverging run shows up in the latter
    r = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
    near = r < 0.1 * domain.delta_star
    failure["near_corner_sup"] = float(np.max(np.abs(f[near])))
    failure["near_corner_sup_last"] = float(np.max(np.abs(f_last[near])))
    best = ScalarField(mesh=mesh, values=f, diagnostics=failure)
    if "stalled" in failure and not opts.continuation:
        raise LineSearchStalled(failure["stalled"], best=best,
                                diagnostics=failure)
    raise NoConvergence(
        "Newton did not converge"
        + (" (load continuation exhausted)" if opts.continuation else ""),
        best=best,
        diagnostics=failure,
    )


def graph_area(fieldish, mesh=None):
    """Area of the solution graph, sum of area * sqrt(1 + |grad f|^2)."""
    if isinstance(fieldish, ScalarField):
        mesh, f = fieldish.mesh, fieldish.values
    else:
        f = np.asarray(fieldish, dtype=float)
    area, G = _p1_geometry(mesh.vertices, mesh.triangles)
    grad = np.einsum("ti,tid->td", f[mesh.triangles], G)
    return float(np.sum(area * np.sqrt(1.0 + np.sum(grad * grad, axis=1))))


def empirical_bounds(field, hspec):
    """(M1, M2) = (sup |f|, sup |H(x, f)|) over the mesh vertices."""
    f = field.values
    M1 = float(np.max(np.abs(f)))
    M2 = float(np.max(np.abs(hspec(field.mesh.vertices, f))))
    return M1, M2


def capillary_flux_defect(field, bspec, tag):
    """Edge-averaged defect |T f . nu - cos gamma| on a capillary tag.

    Uses the elementwise-constant T f of the triangle adjacent to each
    boundary edge; first-order in h, useful as a refinement diagnostic.
    """
    mesh = field.mesh
    tagged = bspec.by_tag()
    bc = tagged[tag]
    if not isinstance(bc, Capillary):
        raise ValueError(f"tag {tag} is not capillary")
    arcl = _boundary_arclengths(mesh)
    edge_of = {}
    t = mesh.triangles
    for ti, (i, j, k) in enumerate(t):
        for a, b in ((i, j), (j, k), (k, i)):
            edge_of[(min(a, b), max(a, b))] = ti
    grads = field.triangle_gradients()
    W = np.sqrt(1.0 + np.sum(grads * grads, axis=1))
    T = grads / W[:, None]
    total_len = 0.0
    defect = 0.0
    for (i, j), etag in zip(mesh.boundary_edges, mesh.boundary_tags):
        if etag != tag:
            continue
        i, j = int(i), int(j)
        ti = edge_of[(min(i, j), max(i, j))]
        e = mesh.vertices[j] - mesh.vertices[i]
        ln = float(np.linalg.norm(e))
        # outward normal: boundary edges are CCW, interior on the left
        nu = np.array([e[1], -e[0]]) / ln
        s_mid = 0.5 * (arcl[tag][i] + arcl[tag][j])
        g = float(bc.gamma_at(s_mid))
        defect += ln * abs(float(T[ti] @ nu) - np.cos(g))
        total_len += ln
    return defect / total_len


def unbounded_corner_probe(domain, hspec, bspec, h_values, grading=1.0,
                           options=None):
    """Probe for corner blow-up by comparing refinements.

    Solves (or fails to solve) at each mesh size, records the supremum of
    |f| near the corner from the returned or best iterate, and flags
    UnboundedCornerSuspected when the supremum at least doubles under a
    refinement.
    """
    from .geometry import generate_mesh

    opts = options or SolverOptions(max_iter=30, continuation=False)
    sups, converged = [], []
    for h in h_values:
        mesh = generate_mesh(domain, h, grading)
        r = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
        near = r < 0.1 * domain.delta_star
        try:
            fld = solve(domain, mesh, hspec, bspec, opts)
            converged.append(True)
            sups.append(float(np.max(np.abs(fld.values[near]))))
        except (NoConvergence, LineSearchStalled) as exc:
            # a run with no discrete solution diverges; the last iterate
            # carries the corner growth
            converged.append(False)
            sups.append(exc.diagnostics.get(
                "near_corner_sup_last", exc.diagnostics["near_corner_sup"]))
    flag = any(
        b >= 2.0 * a for a, b in zip(sups, sups[1:]) if a > 0
    ) or (len(sups) > 1 and sups[0] == 0.0 and max(sups) > 0)
    return {
        "h_values": list(h_values),
        "near_corner_sup": sups,
        "converged": converged,
        "UnboundedCornerSuspected": bool(flag),
    }

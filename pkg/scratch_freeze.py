"""Validation runs to freeze oracle numbers for the test suite."""
import numpy as np

import wedgecap as wc
import wedgecap.errors as err
from wedgecap import config as cfg

print("== (c) estimate_limit synthetics ==")
radii = 0.25 * 2.0 ** -np.arange(7)
fit = wc.estimate_limit(2.0 + radii, radii)
print("2+r     ->", fit.limit, fit.exponent, fit.error_bar)
fit2 = wc.estimate_limit(1.0 + np.sqrt(radii), radii)
print("1+sqrt  ->", fit2.limit, fit2.exponent, fit2.error_bar)
fit3 = wc.estimate_limit(np.full_like(radii, 3.5), radii)
print("const   ->", fit3.limit, fit3.exponent, fit3.error_bar)


def _prof(thetas, vals, alpha):
    return wc.RadialProfile(
        theta_grid=thetas, limits=vals, errors=np.zeros_like(vals),
        fit_exponents=np.full_like(vals, np.nan), alpha=alpha,
    )


print()
print("== (e) classify on fan_profile ==")
thetas = np.linspace(-np.pi / 2, np.pi / 2, 83)[1:-1]
vals = wc.fan_profile(thetas, -0.3, 0.4, lo=0.0, hi=1.0)
rep = wc.classify(_prof(thetas, vals, np.pi / 2), (0.0, 0.0), tol=0.01)
print("increasing:", rep.kind, rep.alpha1, rep.alpha2, rep.direction)
vals_d = wc.fan_profile(thetas, -0.3, 0.4, lo=1.0, hi=0.0)
rep_d = wc.classify(_prof(thetas, vals_d, np.pi / 2), (1.0, 0.0), tol=0.01)
print("decreasing:", rep_d.kind, rep_d.alpha1, rep_d.alpha2, rep_d.direction)
bump = np.exp(-((thetas) ** 2) / 0.05)
rep_b = wc.classify(_prof(thetas, bump, np.pi / 2), (0.0, 0.0), tol=0.01)
print("bump:", rep_b.kind, repr(rep_b.reason))
const_bad = np.full_like(thetas, 1.0)
rep_c = wc.classify(_prof(thetas, const_bad, np.pi / 2), (0.0, 0.0), tol=0.01)
print("const far z2:", rep_c.kind, repr(rep_c.reason))

print()
print("== (d) side_limit tilted plane ==")
dom = wc.build_wedge(np.pi / 3, 1.0)
mesh = wc.generate_mesh(dom, 0.04)
f_plane = wc.ScalarField(mesh=mesh, values=mesh.vertices[:, 0].copy())
lim = wc.side_limit(f_plane, "minus")
print("minus wall limit:", lim.limit, lim.exponent, lim.error_bar)

print()
print("== (h) default_radii / sample_ray edge cases ==")
mesh_c = wc.generate_mesh(dom, 0.2)
try:
    r = wc.default_radii(mesh_c, k_max=6)
    print("h=0.2 radii:", r)
except err.BelowResolution as e:
    print("h=0.2 BelowResolution:", e)
mesh_fl = wc.generate_mesh(dom, 0.2, r_floor=0.25)
try:
    r = wc.default_radii(mesh_fl, k_max=6)
    print("r_floor=0.25 radii:", r)
except err.BelowResolution as e:
    print("r_floor=0.25 BelowResolution:", e)

dom_curved = wc.build_wedge(np.pi / 3, 1.0, arc_spec=(None, (0.2,)))
mesh_cu = wc.generate_mesh(dom_curved, 0.04)
f_cu = wc.ScalarField(mesh=mesh_cu, values=np.zeros(len(mesh_cu.vertices)))
theta_ray = -np.pi / 3 + 0.05
try:
    wc.sample_ray(f_cu, theta_ray, np.array([0.3, 0.2, 0.1]))
    print("curved ray: no error")
except err.RayOutsideDomain as e:
    print("curved ray RayOutsideDomain:", e)

print()
print("== (b) contact_inequality_check curved wall ==")
fam = wc.mu_family(np.pi / 3, np.pi / 2, np.pi / 8, 0.5)
print("family: tau1=%.6f tau2=%.6f beta=%.6f theta_mu=%.6f R_mu=%.6f r0=%.6f"
      % (fam.tau1, fam.tau2, fam.beta, fam.theta_mu, fam.R_mu, fam.r0))
lo_b, up_b = wc.barrier_pair(fam)
chk = wc.contact_inequality_check((lo_b, up_b), dom, np.pi / 2, delta_probe=0.05)
print("straight:", chk["holds"], chk["delta1"],
      chk["min_margin_lower"], chk["min_margin_upper"])
dom_c2 = wc.build_wedge(np.pi / 3, 1.0, arc_spec=(None, (0.1,)))
chk2 = wc.contact_inequality_check((lo_b, up_b), dom_c2, np.pi / 2,
                                   delta_probe=0.05)
print("curved 0.1r:", chk2["holds"], chk2["delta1"],
      chk2["min_margin_lower"], chk2["min_margin_upper"])

print()
print("== (j,k) cap graph area + all-capillary linear solve ==")
c = cfg.cap_preset(h_max=0.04)
dom_cap = cfg.domain_of(c)
mesh_cap = wc.generate_mesh(dom_cap, 0.04, grading=c["mesh"].get("grading", 1.0),
                            r_floor=c["mesh"].get("r_floor", 0.01))
hs = cfg.hspec_of(c)
bs = cfg.bspec_of(c)
fld = wc.solve(dom_cap, mesh_cap, hs, bs)
ga = wc.graph_area(fld)
exact_ga = (2 * np.pi / 3) * (4 - 2 * np.sqrt(3))
print("graph area:", ga, "exact:", exact_ga, "diff:", abs(ga - exact_ga))

mesh_small = wc.generate_mesh(dom, 0.08)
hs_lin = wc.linear_H(0.25, 0.3)
bs_cap_all = wc.BoundarySpec(
    side_plus=wc.Capillary(np.pi / 2),
    side_minus=wc.Capillary(np.pi / 2),
    outer_arc=wc.Capillary(np.pi / 2),
)
fld_lin = wc.solve(dom, mesh_small, hs_lin, bs_cap_all)
print("all-capillary linear: range", fld_lin.values.min(), fld_lin.values.max(),
      "expect", -0.3 / 0.25)

print()
print("== (f) vacuous band / BarrierFootprintMiss ==")
M1, M2 = wc.empirical_bounds(fld, hs)
print("cap M1,M2:", M1, M2)
fam_cap = wc.mu_family(np.pi / 3, np.pi / 2, np.pi / 8, M2)
lo, up = wc.barrier_pair(fam_cap)
for delta in (0.5, 0.05, 1e-4):
    try:
        w = wc.choose_anchor(fld, delta)
        rep = wc.sandwich_check(fld, fam_cap, (lo, up), w, delta)
        print("delta=%g: valid=%s vac=%s p=%.4f gaps=(%.4f, %.4f) pts=%d"
              % (delta, rep.valid, rep.vacuous_band, rep.p_delta,
                 rep.min_gap_lower, rep.min_gap_upper, len(rep.region)))
    except err.WedgecapError as e:
        print("delta=%g: %s: %s" % (delta, type(e).__name__, e))

print()
print("== (a) tanh run: oscillation + p(delta) ==")
ct = cfg.tanh_jump_preset()
dom_t = cfg.domain_of(ct)
mesh_t = wc.generate_mesh(dom_t, ct["mesh"]["h_max"],
                          grading=ct["mesh"].get("grading", 1.0),
                          r_floor=ct["mesh"].get("r_floor", 0.01))
fld_t = wc.solve(dom_t, mesh_t, cfg.hspec_of(ct), cfg.bspec_of(ct))
M0_t = wc.graph_area(fld_t)
delta_t = 0.2 ** 2
p_t = wc.p_of_delta(M0_t, delta_t)
print("tanh M0:", M0_t, "p(0.04):", p_t)
oscs = [wc.oscillation_on_circle(fld_t, r) for r in (0.2, 0.1, 0.05, 0.025)]
print("tanh oscs:", oscs)
grads = wc.ScalarField(mesh=mesh_t, values=fld_t.values)
# discretization proxy at innermost circle
tri = mesh_t.triangles
v = mesh_t.vertices
e1 = v[tri[:, 1]] - v[tri[:, 0]]
e2 = v[tri[:, 2]] - v[tri[:, 0]]
det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
fv = fld_t.values
d1 = fv[tri[:, 1]] - fv[tri[:, 0]]
d2 = fv[tri[:, 2]] - fv[tri[:, 0]]
gx = (d1 * e2[:, 1] - d2 * e1[:, 1]) / det
gy = (-d1 * e2[:, 0] + d2 * e1[:, 0]) / det
gmax = np.max(np.hypot(gx, gy))
et = mesh_t.edge_target(0.025)
print("tanh max|grad|:", gmax, "edge_target(0.025):", et, "proxy:", et * gmax)
print("bound p + 10*proxy:", p_t + 10 * et * gmax, ">= osc_inner:", oscs[-1])

# same numbers for the cap run (criterion 8 freeze)
mesh_cap2 = wc.generate_mesh(dom_cap, 0.02, grading=c["mesh"].get("grading", 1.0),
                             r_floor=c["mesh"].get("r_floor", 0.01))
fld_cap2 = wc.solve(dom_cap, mesh_cap2, hs, bs)
M0_c = wc.graph_area(fld_cap2)
p_c = wc.p_of_delta(M0_c, 0.04)
oscs_c = [wc.oscillation_on_circle(fld_cap2, r) for r in (0.2, 0.1, 0.05, 0.025)]
fvc = fld_cap2.values
tri = mesh_cap2.triangles
v = mesh_cap2.vertices
e1 = v[tri[:, 1]] - v[tri[:, 0]]
e2 = v[tri[:, 2]] - v[tri[:, 0]]
det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
d1 = fvc[tri[:, 1]] - fvc[tri[:, 0]]
d2 = fvc[tri[:, 2]] - fvc[tri[:, 0]]
gx = (d1 * e2[:, 1] - d2 * e1[:, 1]) / det
gy = (-d1 * e2[:, 0] + d2 * e1[:, 0]) / det
gmax_c = np.max(np.hypot(gx, gy))
et_c = mesh_cap2.edge_target(0.025)
print("cap M0:", M0_c, "p(0.04):", p_c, "oscs:", oscs_c)
print("cap proxy:", et_c * gmax_c, "bound:", p_c + 10 * et_c * gmax_c)

print()
print("== (g) blow-up probe two levels ==")
import time
t0 = time.perf_counter()
dom_b = wc.build_wedge(np.pi / 6, 1.0)
bs_b = wc.BoundarySpec(
    side_plus=wc.Capillary(np.pi / 6),
    side_minus=wc.Capillary(np.pi / 6),
    outer_arc=wc.Dirichlet(0.0),
)
probe = wc.unbounded_corner_probe(dom_b, wc.constant_H(0.0), bs_b,
                                  h_values=(0.08, 0.04))
print("flag:", probe["UnboundedCornerSuspected"], "sups:", probe["near_corner_sup"],
      "%.2fs" % (time.perf_counter() - t0))

print()
print("== CF exact-zero candidates ==")
for (a, g1, g2) in ((np.pi / 4, np.pi / 2, 0.0),
                    (np.pi / 6, np.pi / 2, np.pi / 2 - np.pi / 3)):
    r = wc.concus_finn_admissible(a, g1, g2)
    print(a, g1, g2, "->", r["admissible"], repr(r["slack"]))

print()
print("== indeterminate exit path ==")
rep1 = wc.check_theorem1(0.9, 1.8)
print("theorem1(0.9, 1.8):", rep1.holds, rep1.verdict, rep1.reason)

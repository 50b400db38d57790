"""Radial-limit extraction: ladders, fits, and the dichotomy classifier."""

import numpy as np
import pytest

import wedgecap as wc
from wedgecap.errors import (
    BelowResolution,
    FitIllConditioned,
    NoisyProfile,
    RayOutsideDomain,
)


def _profile(thetas, vals, alpha, errors=None):
    vals = np.asarray(vals, dtype=float)
    errors = np.zeros_like(vals) if errors is None else errors
    return wc.RadialProfile(
        theta_grid=thetas, limits=vals, errors=errors,
        fit_exponents=np.full_like(vals, np.nan), alpha=alpha,
    )


# ---------------------------------------------------------------------------
# power-model extrapolation


def test_estimate_limit_linear_decay():
    radii = 0.25 * 2.0 ** -np.arange(7)
    fit = wc.estimate_limit(2.0 + radii, radii)
    assert fit.limit == pytest.approx(2.0, abs=1e-8)
    assert fit.exponent == pytest.approx(1.0, abs=1e-6)
    assert fit.error_bar > 0


def test_estimate_limit_sqrt_decay():
    radii = 0.25 * 2.0 ** -np.arange(7)
    fit = wc.estimate_limit(1.0 + np.sqrt(radii), radii)
    assert fit.limit == pytest.approx(1.0, abs=1e-6)
    assert fit.exponent == pytest.approx(0.5, abs=1e-6)


def test_estimate_limit_constant_sequence():
    radii = 0.25 * 2.0 ** -np.arange(5)
    fit = wc.estimate_limit(np.full_like(radii, 3.5), radii)
    assert fit.limit == 3.5
    assert fit.exponent is None
    assert fit.error_bar == 0.0


def test_estimate_limit_guards():
    with pytest.raises(FitIllConditioned):
        wc.estimate_limit([1.0, 1.1, 1.2], [0.4, 0.2, 0.1])
    # radii span below one dyadic octave
    with pytest.raises(FitIllConditioned):
        wc.estimate_limit([1.0, 1.1, 1.2, 1.3], [0.20, 0.18, 0.16, 0.14])


# ---------------------------------------------------------------------------
# ladders and rays


def test_default_radii_dyadic():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.04)
    r = wc.default_radii(mesh, k_max=6)
    assert r[0] == pytest.approx(0.25)
    np.testing.assert_allclose(r[:-1] / r[1:], 2.0)
    assert len(r) >= 4


def test_default_radii_below_resolution():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    # a high grading floor leaves fewer than 4 usable rungs
    mesh = wc.generate_mesh(dom, 0.2, r_floor=0.25)
    with pytest.raises(BelowResolution):
        wc.default_radii(mesh, k_max=6)


def test_sample_ray_validation():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.08)
    f = wc.ScalarField(mesh=mesh, values=mesh.vertices[:, 0].copy())
    with pytest.raises(RayOutsideDomain):
        wc.sample_ray(f, np.pi / 2, np.array([0.2, 0.1]))
    with pytest.raises(ValueError):
        wc.sample_ray(f, 0.0, np.array([0.1, 0.2]))  # not decreasing
    with pytest.raises(BelowResolution):
        wc.sample_ray(f, 0.0, np.array([0.2, 1e-7]))


def test_sample_ray_exits_curved_domain():
    # the minus arc bends inward; a ray hugging it leaves the domain
    dom = wc.build_wedge(np.pi / 3, 1.0, arc_spec=(None, (0.2,)))
    mesh = wc.generate_mesh(dom, 0.04)
    f = wc.ScalarField(mesh=mesh, values=np.zeros(len(mesh.vertices)))
    with pytest.raises(RayOutsideDomain):
        wc.sample_ray(f, -np.pi / 3 + 0.05, np.array([0.3, 0.2, 0.1]))


def test_sample_ray_values_on_plane():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.04)
    f = wc.ScalarField(mesh=mesh, values=mesh.vertices[:, 0].copy())
    radii = np.array([0.2, 0.1, 0.05])
    vals = wc.sample_ray(f, 0.25, radii)
    np.testing.assert_allclose(vals, radii * np.cos(0.25), atol=2e-4)


def test_side_limit_tilted_plane():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.04)
    f = wc.ScalarField(mesh=mesh, values=mesh.vertices[:, 0].copy())
    fit = wc.side_limit(f, "SideMinus")
    assert fit.limit == pytest.approx(0.0, abs=1e-6)
    assert fit.exponent == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(ValueError):
        wc.side_limit(f, "outer")


# ---------------------------------------------------------------------------
# profile container


def test_radial_profile_validation():
    th = np.linspace(-0.5, 0.5, 11)
    vals = np.zeros_like(th)
    with pytest.raises(ValueError):
        _profile(th[::-1], vals, 0.6)
    with pytest.raises(ValueError):
        _profile(th, vals, 0.5)  # endpoints touch the walls
    with pytest.raises(ValueError):
        _profile(th, vals, 0.6, errors=np.full_like(th, -1.0))


# ---------------------------------------------------------------------------
# classifier


def test_classify_constant_all():
    th = np.linspace(-1.0, 1.0, 41)
    vals = np.full_like(th, 2.0)
    rep = wc.classify(_profile(th, vals, 1.1), (2.0, 0.0), tol=1e-3)
    assert rep.kind == "ConstantAll"
    assert rep.value == pytest.approx(2.0)
    assert rep.consistency_gap == 0.0


def test_classify_fan_increasing_and_decreasing():
    th = np.linspace(-np.pi / 2, np.pi / 2, 83)[1:-1]
    up = wc.fan_profile(th, -0.3, 0.4, lo=0.0, hi=1.0)
    rep = wc.classify(_profile(th, up, np.pi / 2), (0.0, 0.0), tol=0.01)
    assert rep.kind == "Fan"
    assert rep.direction == "increasing"
    assert rep.alpha1 == pytest.approx(-0.3, abs=0.05)
    assert rep.alpha2 == pytest.approx(0.4, abs=0.05)
    assert rep.alpha1 < rep.alpha2

    dn = wc.fan_profile(th, -0.3, 0.4, lo=1.0, hi=0.0)
    rep2 = wc.classify(_profile(th, dn, np.pi / 2), (1.0, 0.0), tol=0.01)
    assert rep2.kind == "Fan"
    assert rep2.direction == "decreasing"


def test_classify_interior_bump_is_unclassified():
    th = np.linspace(-np.pi / 2, np.pi / 2, 83)[1:-1]
    bump = np.exp(-th ** 2 / 0.05)
    rep = wc.classify(_profile(th, bump, np.pi / 2), (0.0, 0.0), tol=0.01)
    assert rep.kind == "Unclassified"
    assert rep.reason == "middle segment has significant steps of both signs"


def test_classify_constant_inconsistent_with_side_limit():
    th = np.linspace(-1.0, 1.0, 41)
    rep = wc.classify(_profile(th, np.full_like(th, 1.0), 1.1), (0.0, 0.0),
                      tol=0.01)
    assert rep.kind == "Unclassified"
    assert rep.reason == "constant profile inconsistent with side limit"


def test_classify_fan_inconsistent_with_side_limit():
    th = np.linspace(-np.pi / 2, np.pi / 2, 83)[1:-1]
    up = wc.fan_profile(th, -0.3, 0.4, lo=0.0, hi=1.0)
    rep = wc.classify(_profile(th, up, np.pi / 2), (0.7, 0.0), tol=0.01)
    assert rep.kind == "Unclassified"
    assert rep.reason == "leftmost radial limit inconsistent with side limit"


def test_classify_noisy_profile_raises():
    th = np.linspace(-1.0, 1.0, 41)
    vals = np.full_like(th, 2.0)
    errs = np.full_like(th, 0.5)
    with pytest.raises(NoisyProfile):
        wc.classify(_profile(th, vals, 1.1, errors=errs), (2.0, 0.0), tol=0.01)


def test_classify_default_tolerance_from_errors():
    th = np.linspace(-1.0, 1.0, 41)
    vals = np.full_like(th, 2.0)
    rep = wc.classify(_profile(th, vals, 1.1), (2.0, 0.0))
    assert rep.kind == "ConstantAll"
    assert rep.tol == pytest.approx(1e-12)


def test_fan_profile_shape():
    th = np.linspace(-1.0, 1.0, 201)
    v = wc.fan_profile(th, -0.2, 0.5, lo=1.0, hi=3.0)
    assert v[0] == 1.0 and v[-1] == 3.0
    assert np.all(np.diff(v) >= 0)
    np.testing.assert_allclose(v[th <= -0.2], 1.0)
    np.testing.assert_allclose(v[th >= 0.5], 3.0)


# ---------------------------------------------------------------------------
# end-to-end profile on a known field


def test_radial_profile_of_plane_field():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.04)
    f = wc.ScalarField(mesh=mesh, values=mesh.vertices[:, 0].copy())
    prof = wc.radial_profile(f, n_theta=21, k_max=5)
    assert len(prof.theta_grid) == 21
    assert prof.theta_grid[0] > -np.pi / 3
    assert prof.theta_grid[-1] < np.pi / 3
    # the plane vanishes at the corner along every ray
    np.testing.assert_allclose(prof.limits, 0.0, atol=1e-5)
    # bars reflect the innermost-rung trace (~r_min/2), so tol sits above
    rep = wc.classify(prof, wc.side_limit(f, "SideMinus"), tol=0.05)
    assert rep.kind == "ConstantAll"

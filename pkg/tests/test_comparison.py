"""Sandwich bounds, height band, and continuity probes near the corner."""

import numpy as np
import pytest

import wedgecap as wc
from wedgecap.errors import (BarrierFootprintMiss, BelowResolution,
                             DeltaOutOfRange, PreconditionsUnmet)


@pytest.fixture(scope="module")
def cap_sandwich(cap_problem, cap_fields):
    mesh, field = cap_fields(0.04)
    family = wc.mu_family(np.pi / 3, np.pi / 2, np.pi / 8)
    barriers = wc.barrier_pair(family)
    return field, family, barriers


# ---------------------------------------------------------------------------
# height band


def test_p_of_delta_closed_form():
    assert wc.p_of_delta(1.0, np.exp(-1.0)) == pytest.approx(
        np.sqrt(8 * np.pi), rel=1e-12)
    assert wc.p_of_delta(np.log(10.0) / (8 * np.pi), 0.1) == pytest.approx(
        1.0, rel=1e-12)


def test_p_of_delta_guards():
    for bad in (0.0, 1.0, 2.0, -0.3):
        with pytest.raises(DeltaOutOfRange):
            wc.p_of_delta(1.0, bad)
    with pytest.raises(ValueError):
        wc.p_of_delta(0.0, 0.5)


def test_p_of_delta_shrinks_with_delta():
    ds = np.array([0.5, 0.1, 0.01, 1e-4])
    ps = [wc.p_of_delta(1.0, d) for d in ds]
    assert all(a > b for a, b in zip(ps, ps[1:]))


# ---------------------------------------------------------------------------
# circle probes


def test_oscillation_on_linear_field(cap_fields):
    mesh, field = cap_fields(0.08)
    tilted = wc.ScalarField(mesh, mesh.vertices[:, 0].copy())
    # x1 over the arc |theta| <= pi/3 at radius r spans r(1 - cos(pi/3))
    assert wc.oscillation_on_circle(tilted, 0.5) == pytest.approx(0.25, abs=5e-3)


def test_oscillation_of_radial_field_is_small(cap_fields):
    _, field = cap_fields(0.08)
    assert wc.oscillation_on_circle(field, 0.5) < 1e-3


def test_oscillation_resolution_guard(cap_fields):
    mesh, field = cap_fields(0.08)
    with pytest.raises(BelowResolution):
        wc.oscillation_on_circle(field, 1e-9)
    with pytest.raises(BelowResolution):
        wc.oscillation_on_circle(field, 2.0)


def test_choose_anchor_lies_on_probe_circle(cap_fields):
    _, field = cap_fields(0.08)
    w = wc.choose_anchor(field, 0.25)
    assert np.hypot(*w) == pytest.approx(0.5, rel=1e-9)
    with pytest.raises(DeltaOutOfRange):
        wc.choose_anchor(field, 1.5)


# ---------------------------------------------------------------------------
# footprint


def test_footprint_region_masks(cap_fields, cap_sandwich):
    mesh, _ = cap_fields(0.04)
    _, _, barriers = cap_sandwich
    pts, mask = wc.footprint_region(mesh, barriers)
    assert len(pts) == mask.sum()
    from wedgecap.barriers import in_footprint
    for b in barriers:
        assert np.all(in_footprint(b, pts))
    assert not np.all(mask)
    pts_small, _ = wc.footprint_region(mesh, barriers, radius=0.3)
    assert 0 < len(pts_small) < len(pts)
    assert np.all(np.hypot(pts_small[:, 0], pts_small[:, 1]) <= 0.3)


# ---------------------------------------------------------------------------
# the sandwich itself


def test_sandwich_cap_tight_band(cap_sandwich):
    field, family, barriers = cap_sandwich
    w = wc.choose_anchor(field, 0.05)
    rep = wc.sandwich_check(field, family, barriers, w, 0.05)
    assert rep.valid
    assert not rep.vacuous_band
    assert rep.p_delta == pytest.approx(3.068, abs=2e-2)
    assert rep.min_gap_lower > 0 and rep.min_gap_upper > 0
    assert np.all(rep.margins_lower > 0) and np.all(rep.margins_upper > 0)
    assert len(rep.region) > 1000
    assert rep.radius == pytest.approx(np.sqrt(0.05))


def test_sandwich_wide_band_is_vacuous(cap_sandwich):
    field, family, barriers = cap_sandwich
    w = wc.choose_anchor(field, 0.5)
    rep = wc.sandwich_check(field, family, barriers, w, 0.5)
    assert rep.vacuous_band
    assert rep.valid
    assert rep.p_delta >= 2.0 * field.sup_abs()


def test_sandwich_rejects_off_circle_anchor(cap_sandwich):
    field, family, barriers = cap_sandwich
    with pytest.raises(PreconditionsUnmet):
        wc.sandwich_check(field, family, barriers, (0.9, 0.0), 0.05)


def test_sandwich_delta_guard(cap_sandwich):
    field, family, barriers = cap_sandwich
    with pytest.raises(DeltaOutOfRange):
        wc.sandwich_check(field, family, barriers, (0.1, 0.0), 0.0)


def test_sandwich_footprint_miss_on_coarse_mesh(cap_problem):
    dom, hs, bs = (cap_problem["domain"], cap_problem["hspec"],
                   cap_problem["bspec"])
    mesh = wc.generate_mesh(dom, 0.2, r_floor=0.05)
    field = wc.solve(dom, mesh, hs, bs)
    family = wc.mu_family(np.pi / 3, np.pi / 2, np.pi / 8)
    barriers = wc.barrier_pair(family)
    with pytest.raises(BarrierFootprintMiss):
        wc.sandwich_check(field, family, barriers, (1e-4, 0.0), 1e-8)


# ---------------------------------------------------------------------------
# empirical modulus


def test_uniform_continuity_probe_constant(cap_fields):
    mesh, _ = cap_fields(0.08)
    flat = wc.ScalarField(mesh, np.full(len(mesh.vertices), 3.0))
    assert wc.uniform_continuity_probe(flat, None, 0.2) == 0.0


def test_uniform_continuity_probe_linear(cap_fields):
    mesh, _ = cap_fields(0.08)
    tilted = wc.ScalarField(mesh, mesh.vertices[:, 0].copy())
    ds = [0.05, 0.1, 0.2, 0.4]
    om = [wc.uniform_continuity_probe(tilted, None, d) for d in ds]
    for d, o in zip(ds, om):
        assert o <= d + 1e-9
    assert all(a <= b for a, b in zip(om, om[1:]))


def test_uniform_continuity_probe_region_forms(cap_fields):
    mesh, field = cap_fields(0.08)
    mask = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1]) < 0.5
    by_mask = wc.uniform_continuity_probe(field, mask, 0.1)
    by_pts = wc.uniform_continuity_probe(field, mesh.vertices[mask], 0.1)
    assert by_mask == by_pts
    assert by_mask <= wc.uniform_continuity_probe(field, None, 0.1)

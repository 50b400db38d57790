"""Finite element solver: convergence, bounds, diagnostics, divergence."""

import numpy as np
import pytest

import wedgecap as wc
from wedgecap.errors import IllPosed, LineSearchStalled, NoConvergence

from conftest import cap_exact


# ---------------------------------------------------------------------------
# specification objects


def test_mean_curvature_spec_validation():
    with pytest.raises(ValueError):
        wc.MeanCurvatureSpec("weird")
    with pytest.raises(ValueError):
        wc.linear_H(-0.5)
    with pytest.raises(ValueError):
        wc.MeanCurvatureSpec("spatial", func=None)


def test_mean_curvature_spec_evaluation():
    x = np.array([[0.3, 0.1], [0.5, -0.2]])
    t = np.array([1.0, 2.0])
    np.testing.assert_allclose(wc.constant_H(-0.5)(x, t), [-0.5, -0.5])
    np.testing.assert_allclose(wc.linear_H(0.25, 0.3)(x, t), [0.55, 0.8])
    hs = wc.spatial_H(lambda p: p[:, 0])
    np.testing.assert_allclose(hs(x, t), [0.3, 0.5])


def test_potential_differentiates_to_2H():
    x = np.zeros((3, 2))
    t = np.array([0.4, 1.0, -0.7])
    eps = 1e-6
    for hs in (wc.constant_H(-0.5), wc.linear_H(0.25, 0.3)):
        dnum = (hs.potential(x, t + eps) - hs.potential(x, t - eps)) / (2 * eps)
        np.testing.assert_allclose(dnum, 2.0 * hs(x, t), atol=1e-6)


def test_capillary_angle_validation():
    assert np.all(wc.Capillary(np.pi / 3).gamma_at(np.array([0.1])) == np.pi / 3)
    with pytest.raises(ValueError):
        wc.Capillary(4.0).gamma_at(np.array([0.1]))
    g = wc.Capillary(lambda s: np.pi / 2 + 0.1 * s).gamma_at(np.array([0.0, 1.0]))
    np.testing.assert_allclose(g, [np.pi / 2, np.pi / 2 + 0.1])


def test_dirichlet_values():
    d = wc.Dirichlet(lambda p: p[:, 0] + 1.0)
    np.testing.assert_allclose(d.phi_at([[0.5, 0.0]]), [1.5])
    assert wc.Dirichlet(2.0).phi_at([[0.1, 0.2]])[0] == 2.0


# ---------------------------------------------------------------------------
# well-posedness


def test_all_capillary_constant_H_is_ill_posed():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.16)
    bs = wc.BoundarySpec(
        side_plus=wc.Capillary(np.pi / 2),
        side_minus=wc.Capillary(np.pi / 2),
        outer_arc=wc.Capillary(np.pi / 2),
    )
    with pytest.raises(IllPosed):
        wc.solve(dom, mesh, wc.constant_H(-0.5), bs)


def test_all_capillary_linear_H_pins_the_level():
    # 2H = 2(kappa f + H0) zero at f = -H0/kappa; neutral walls keep it flat
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.08)
    bs = wc.BoundarySpec(
        side_plus=wc.Capillary(np.pi / 2),
        side_minus=wc.Capillary(np.pi / 2),
        outer_arc=wc.Capillary(np.pi / 2),
    )
    field = wc.solve(dom, mesh, wc.linear_H(0.25, 0.3), bs)
    np.testing.assert_allclose(field.values, -1.2, atol=1e-9)


# ---------------------------------------------------------------------------
# the manufactured cap


def test_cap_solution_accuracy(cap_fields):
    m1, f1 = cap_fields(0.16)
    m2, f2 = cap_fields(0.08)
    e1 = np.max(np.abs(f1.values - cap_exact(m1.vertices)))
    e2 = np.max(np.abs(f2.values - cap_exact(m2.vertices)))
    assert e2 <= 2e-2
    assert e1 / e2 >= 2.0


def test_cap_graph_area(cap_fields):
    # exact area of the spherical zone over the unit wedge
    mesh, field = cap_fields(0.08)
    exact = (2 * np.pi / 3) * (4 - 2 * np.sqrt(3))
    assert wc.graph_area(field) == pytest.approx(exact, abs=5e-3)
    assert wc.graph_area(field.values, mesh) == wc.graph_area(field)


def test_cap_empirical_bounds(cap_fields, cap_problem):
    _, field = cap_fields(0.08)
    M1, M2 = wc.empirical_bounds(field, cap_problem["hspec"])
    assert M1 == pytest.approx(2.0, abs=2e-2)
    assert M2 == 0.5


def test_cap_flux_defect(cap_fields, cap_problem):
    _, field = cap_fields(0.08)
    defect = wc.capillary_flux_defect(field, cap_problem["bspec"], "SideMinus")
    assert 0 <= defect < 0.05
    with pytest.raises(ValueError):
        wc.capillary_flux_defect(field, cap_problem["bspec"], "OuterArc")


def test_energy_decreases_with_refinement(cap_problem, cap_fields):
    hs, bs = cap_problem["hspec"], cap_problem["bspec"]
    m1, f1 = cap_fields(0.16)
    m2, f2 = cap_fields(0.08)
    e1 = wc.energy(m1, hs, bs, f1.values)
    e2 = wc.energy(m2, hs, bs, f2.values)
    assert np.isfinite(e1) and np.isfinite(e2)
    assert e2 <= e1 + 1e-6


def test_solve_is_deterministic(cap_problem):
    dom, hs, bs = (cap_problem["domain"], cap_problem["hspec"],
                   cap_problem["bspec"])
    mesh = wc.generate_mesh(dom, 0.16)
    f1 = wc.solve(dom, mesh, hs, bs)
    f2 = wc.solve(dom, mesh, hs, bs)
    assert np.array_equal(f1.values, f2.values)


def test_interpolate_reproduces_vertex_values(cap_fields):
    mesh, field = cap_fields(0.08)
    idx = np.array([10, 100, 500])
    got = field.interpolate(mesh.vertices[idx])
    np.testing.assert_allclose(got, field.values[idx], atol=1e-10)


# ---------------------------------------------------------------------------
# divergence detection


def _blowup_problem():
    dom = wc.build_wedge(np.pi / 6, 1.0)
    bs = wc.BoundarySpec(
        side_plus=wc.Capillary(np.pi / 6),
        side_minus=wc.Capillary(np.pi / 6),
        outer_arc=wc.Dirichlet(0.0),
    )
    return dom, wc.constant_H(0.0), bs


def test_divergent_run_reports_diagnostics():
    dom, hs, bs = _blowup_problem()
    mesh = wc.generate_mesh(dom, 0.08)
    with pytest.raises(LineSearchStalled) as exc:
        wc.solve(dom, mesh, hs, bs, wc.SolverOptions(max_iter=30,
                                                     continuation=False))
    e = exc.value
    assert isinstance(e.best, wc.ScalarField)
    assert e.diagnostics["near_corner_sup"] > 1.0
    assert "near_corner_sup_last" in e.diagnostics
    assert e.diagnostics["stalled"]


def test_divergent_run_with_continuation():
    dom, hs, bs = _blowup_problem()
    mesh = wc.generate_mesh(dom, 0.08)
    with pytest.raises(NoConvergence) as exc:
        wc.solve(dom, mesh, hs, bs)
    assert "continuation_stalled_at" in exc.value.diagnostics


def test_unbounded_corner_probe_flags_blowup():
    dom, hs, bs = _blowup_problem()
    probe = wc.unbounded_corner_probe(dom, hs, bs, h_values=(0.08, 0.04))
    assert probe["UnboundedCornerSuspected"] is True
    sups = probe["near_corner_sup"]
    assert len(sups) == 2 and sups[1] > 2 * sups[0]
    assert probe["converged"] == [False, False]


def test_unbounded_corner_probe_quiet_on_good_problem(cap_problem):
    probe = wc.unbounded_corner_probe(
        cap_problem["domain"], cap_problem["hspec"], cap_problem["bspec"],
        h_values=(0.16, 0.08))
    assert probe["UnboundedCornerSuspected"] is False
    assert probe["converged"] == [True, True]

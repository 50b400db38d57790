"""Wedge domains, graded meshes, and boundary bookkeeping."""

import os

import numpy as np
import pytest

import wedgecap as wc
from wedgecap.errors import ArcsCross, InvalidAngle, OutOfRange, QualityFailure, TooCoarse
from wedgecap.geometry import (
    MIN_ANGLE_DEG,
    ArcSpec,
    cartesian_of,
    exterior_normal,
    export_mesh_text,
    mesh_quality,
    polar_of,
)


# ---------------------------------------------------------------------------
# domain construction


def test_build_wedge_basic():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    assert dom.alpha == np.pi / 3
    assert dom.delta_star == 1.0
    assert dom.theta_plus(0.5) == pytest.approx(np.pi / 3)
    assert dom.theta_minus(0.5) == pytest.approx(-np.pi / 3)


@pytest.mark.parametrize("alpha", [0.0, -0.1, np.pi, 4.0])
def test_build_wedge_rejects_bad_alpha(alpha):
    with pytest.raises(InvalidAngle):
        wc.build_wedge(alpha, 1.0)


def test_build_wedge_rejects_bad_radius():
    with pytest.raises(ValueError):
        wc.build_wedge(np.pi / 3, 0.0)
    with pytest.raises(ValueError):
        wc.build_wedge(np.pi / 3, -2.0)


def test_build_wedge_rejects_offset_not_vanishing():
    with pytest.raises(ValueError):
        wc.build_wedge(np.pi / 3, 1.0, arc_spec=lambda r: 0.1 + 0.0 * r)


def test_build_wedge_arcs_cross():
    # gap 2*alpha - 0.8 r hits zero at r = 0.75 < delta*
    with pytest.raises(ArcsCross):
        wc.build_wedge(0.3, 1.0, arc_spec=((-0.4,), (0.4,)))


def test_build_wedge_arcs_wind():
    # aperture 2 pi - 0.01 plus a slow outward drift exceeds a full turn
    with pytest.raises(ArcsCross):
        wc.build_wedge(np.pi - 0.005, 1.0, arc_spec=((0.5,), None))


def test_arc_spec_polynomial():
    arc = ArcSpec((0.1, -0.05))
    r = np.array([0.0, 0.3, 1.0])
    np.testing.assert_allclose(arc(r), 0.1 * r - 0.05 * r ** 2)
    np.testing.assert_allclose(arc.derivative(r), 0.1 - 0.1 * r)


def test_curved_pair_applies_per_side():
    dom = wc.build_wedge(np.pi / 3, 1.0, arc_spec=(None, (0.1,)))
    assert dom.theta_plus(0.5) == pytest.approx(np.pi / 3)
    assert dom.theta_minus(0.5) == pytest.approx(-np.pi / 3 + 0.05)


def test_polar_roundtrip():
    assert polar_of((0.0, 0.0)) == (0.0, 0.0)
    r, th = polar_of((0.0, 2.0))
    assert (r, th) == pytest.approx((2.0, np.pi / 2))
    pt = cartesian_of(0.7, -1.1)
    r2, th2 = polar_of(pt)
    assert (r2, th2) == pytest.approx((0.7, -1.1))


def test_contains():
    dom = wc.build_wedge(np.pi / 4, 1.0)
    pts = np.array([
        [0.5, 0.0],        # on the bisector
        [0.5, 0.49],       # just inside the plus wall
        [0.5, 0.51],       # just outside
        [1.1, 0.0],        # beyond the outer arc
        [0.0, 0.0],        # the corner is not in the open wedge
    ])
    np.testing.assert_array_equal(
        dom.contains(pts), [True, True, False, False, False])


def test_exterior_normals_unit_and_outward():
    dom = wc.build_wedge(np.pi / 3, 1.0, arc_spec=(None, (0.1,)))
    for side in ("plus", "minus", "SideMinus"):
        n = exterior_normal(dom, side, 0.4)
        assert np.hypot(*n) == pytest.approx(1.0, abs=1e-9)
        key = {"SideMinus": "minus"}.get(side, side)
        w = dom.wall_point(key, 0.4)
        assert not dom.contains(w + 1e-6 * n)[0]
        assert dom.contains(w - 1e-4 * n)[0]


def test_exterior_normal_straight_wall_values():
    a = np.pi / 2
    dom = wc.build_wedge(a, 1.0)
    np.testing.assert_allclose(exterior_normal(dom, "minus", 0.5),
                               [-1.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(exterior_normal(dom, "plus", 0.5),
                               [-1.0, 0.0], atol=1e-9)


def test_exterior_normal_errors():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    with pytest.raises(ValueError):
        exterior_normal(dom, "outer", 0.5)
    with pytest.raises(OutOfRange):
        exterior_normal(dom, "minus", 5.0)


# ---------------------------------------------------------------------------
# meshing


def test_generate_mesh_argument_validation():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    with pytest.raises(TooCoarse):
        wc.generate_mesh(dom, 1.0)
    with pytest.raises(ValueError):
        wc.generate_mesh(dom, -0.1)
    with pytest.raises(ValueError):
        wc.generate_mesh(dom, 0.1, grading=-1.0)
    with pytest.raises(ValueError):
        wc.generate_mesh(dom, 0.1, r_floor=0.3)  # > delta*/4


def test_generate_mesh_quality_failure_narrow_wedge():
    dom = wc.build_wedge(np.pi / 12, 1.0)
    with pytest.raises(QualityFailure):
        wc.generate_mesh(dom, 0.1)


def test_mesh_structure():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.08)

    v, t = mesh.vertices, mesh.triangles
    # CCW orientation: positive doubled areas
    e1 = v[t[:, 1]] - v[t[:, 0]]
    e2 = v[t[:, 2]] - v[t[:, 0]]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    assert np.all(det > 0)

    # all vertices live in the closed wedge
    r = np.hypot(v[:, 0], v[:, 1])
    th = np.arctan2(v[:, 1], v[:, 0])
    interior = r > 0
    assert np.all(r <= dom.delta_star + 1e-9)
    assert np.all(th[interior] >= -dom.alpha - 1e-9)
    assert np.all(th[interior] <= dom.alpha + 1e-9)

    q = mesh_quality(mesh)
    assert q["min_angle_deg"] >= MIN_ANGLE_DEG
    assert q["h_min"] > 0

    tags = set(mesh.boundary_tags.tolist())
    assert tags == {"SidePlus", "SideMinus", "OuterArc"}


def test_mesh_chains_end_at_corner():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.08)
    # wall chains run outer -> corner; vertex 0 is the corner
    assert mesh.side_plus_chain[-1] == 0
    assert mesh.side_minus_chain[-1] == 0
    r_plus = np.hypot(*mesh.vertices[mesh.side_plus_chain].T)
    assert np.all(np.diff(r_plus) < 0)
    # the outer ring runs from the minus wall to the plus wall
    th = np.arctan2(*mesh.vertices[mesh.outer_arc_idx][:, ::-1].T)
    assert np.all(np.diff(th) > 0)
    np.testing.assert_allclose(
        np.hypot(*mesh.vertices[mesh.outer_arc_idx].T), 1.0, atol=1e-9)


def test_edge_target_grading():
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.08)
    assert mesh.edge_target(0.5) == pytest.approx(0.04)
    # floored below r_floor
    assert mesh.edge_target(0.0) == mesh.edge_target(mesh.r_floor)
    assert mesh.edge_target(mesh.r_floor / 2) == mesh.edge_target(mesh.r_floor)


def test_refinement_shrinks_h(cap_problem):
    dom = cap_problem["domain"]
    q1 = mesh_quality(wc.generate_mesh(dom, 0.16))
    q2 = mesh_quality(wc.generate_mesh(dom, 0.08))
    assert q2["h_max"] < q1["h_max"]


def test_export_mesh_text(tmp_path):
    dom = wc.build_wedge(np.pi / 3, 1.0)
    mesh = wc.generate_mesh(dom, 0.16)
    path = os.path.join(tmp_path, "mesh.txt")
    export_mesh_text(mesh, path)
    kinds = {"v": 0, "t": 0, "b": 0}
    with open(path) as fh:
        for line in fh:
            kinds[line.split()[0]] += 1
    assert kinds["v"] == len(mesh.vertices)
    assert kinds["t"] == len(mesh.triangles)
    assert kinds["b"] == len(mesh.boundary_edges)

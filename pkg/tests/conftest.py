"""Shared fixtures.

The expensive solves (the spherical-cap problem at several mesh sizes and
the tanh-jump scenario) are session scoped and constructed lazily so the
acceptance criteria and the per-module tests share a single run of each.
"""

import numpy as np
import pytest

import wedgecap as wc
from wedgecap import config as cfgmod

CAP_RADIUS = 2.0


def cap_exact(points):
    """Lower hemisphere graph of radius 2 over the unit wedge."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return np.sqrt(CAP_RADIUS ** 2 - pts[:, 0] ** 2 - pts[:, 1] ** 2)


@pytest.fixture(scope="session")
def cap_problem():
    c = cfgmod.cap_preset()
    dom = cfgmod.domain_of(c)
    return {
        "config": c,
        "domain": dom,
        "hspec": cfgmod.hspec_of(c),
        "bspec": cfgmod.bspec_of(c),
    }


@pytest.fixture(scope="session")
def cap_fields(cap_problem):
    """Lazy h -> (mesh, field) cache for the spherical-cap problem."""
    cache = {}

    def get(h):
        if h not in cache:
            mesh = wc.generate_mesh(cap_problem["domain"], h)
            field = wc.solve(cap_problem["domain"], mesh,
                             cap_problem["hspec"], cap_problem["bspec"])
            cache[h] = (mesh, field)
        return cache[h]

    return get


@pytest.fixture(scope="session")
def tanh_problem():
    c = cfgmod.tanh_jump_preset()
    dom = cfgmod.domain_of(c)
    return {
        "config": c,
        "domain": dom,
        "hspec": cfgmod.hspec_of(c),
        "bspec": cfgmod.bspec_of(c),
    }


@pytest.fixture(scope="session")
def tanh_run(tanh_problem):
    """Mesh and solved field for the tanh-jump scenario at its preset h."""
    c = tanh_problem["config"]
    mesh = wc.generate_mesh(
        tanh_problem["domain"], c["mesh"]["h_max"],
        grading=c["mesh"].get("grading", 1.0),
        r_floor=c["mesh"].get("r_floor"),
    )
    field = wc.solve(tanh_problem["domain"], mesh,
                     tanh_problem["hspec"], tanh_problem["bspec"])
    return mesh, field

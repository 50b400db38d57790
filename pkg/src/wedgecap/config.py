"""JSON run configuration: parsing, validation, presets.

A config is a plain JSON object with sections:

    domain:  {alpha, delta_star, arc?}          wedge geometry
    mesh:    {h_max, grading?, r_floor?, max_vertices?}   triangulation controls
    H:       {variant, ...}                     prescribed curvature
    bc:      {side_plus, side_minus, outer_arc} per-tag boundary data
    solver:  {tol_newton?, max_iter?}           Newton controls
    radial:  {n_theta?, k_max?, tol?}           profile estimation
    conditions: {theorem?, lambda1?, lambda2?}  which checker to run
    sandwich: {mu, delta}                       optional sandwich stage
    sweep:   {key(s), values}                   optional batch axis

Boundary entries are {"type": "capillary", "gamma": g} or
{"type": "dirichlet", "value": v} where v is a number or a named trace
preset such as {"preset": "tanh_jump", "eps": ..., "a": ..., "b": ...}.
"""

from __future__ import annotations

import copy
import json
import math

import numpy as np

from .errors import ConfigError
from .geometry import build_wedge
from .solver import (
    BoundarySpec,
    Capillary,
    Dirichlet,
    MeanCurvatureSpec,
    SolverOptions,
    constant_H,
    linear_H,
    spatial_H,
)

__all__ = [
    "load_config",
    "validate_config",
    "domain_of",
    "hspec_of",
    "bspec_of",
    "solver_options_of",
    "set_by_path",
    "get_by_path",
    "cap_preset",
    "tanh_jump_preset",
]

_ALLOWED_TOP = {
    "domain", "mesh", "H", "bc", "solver", "radial",
    "conditions", "sandwich", "sweep", "name",
}


def load_config(path):
    """Read and validate a JSON config file."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}")
    validate_config(cfg)
    return cfg


def _require(cfg, section, key, types, where):
    if key not in cfg:
        raise ConfigError(f"{where}.{key}", "missing required key")
    v = cfg[key]
    if not isinstance(v, types):
        raise ConfigError(f"{where}.{key}", f"expected {types}, got {type(v).__name__}")
    return v


def validate_config(cfg):
    """Structural validation; raises ConfigError naming the offending key."""
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    for k in cfg:
        if k not in _ALLOWED_TOP:
            raise ConfigError(k, "unknown top-level section")
    dom = _require(cfg, "domain", "domain", dict, "<root>")
    _require(dom, None, "alpha", (int, float), "domain")
    _require(dom, None, "delta_star", (int, float), "domain")
    mesh = _require(cfg, "mesh", "mesh", dict, "<root>")
    _require(mesh, None, "h_max", (int, float), "mesh")
    for opt in ("grading", "r_floor", "max_vertices"):
        if opt in mesh and not isinstance(mesh[opt], (int, float)):
            raise ConfigError(f"mesh.{opt}", "must be a number")
    hsec = _require(cfg, "H", "H", dict, "<root>")
    variant = _require(hsec, None, "variant", str, "H")
    if variant not in ("constant", "linear", "radial_poly"):
        raise ConfigError("H.variant", f"unknown variant {variant!r}")
    bc = _require(cfg, "bc", "bc", dict, "<root>")
    for tag in ("side_plus", "side_minus", "outer_arc"):
        ent = _require(bc, None, tag, dict, "bc")
        typ = _require(ent, None, "type", str, f"bc.{tag}")
        if typ == "capillary":
            _require(ent, None, "gamma", (int, float), f"bc.{tag}")
        elif typ == "dirichlet":
            if "value" not in ent:
                raise ConfigError(f"bc.{tag}.value", "missing required key")
        else:
            raise ConfigError(f"bc.{tag}.type", f"unknown type {typ!r}")
    if "sandwich" in cfg:
        sw = cfg["sandwich"]
        _require(sw, None, "mu", (int, float), "sandwich")
        _require(sw, None, "delta", (int, float), "sandwich")
    if "sweep" in cfg:
        _validate_sweep(cfg["sweep"])
    return cfg


def _validate_sweep(sw):
    if not isinstance(sw, dict):
        raise ConfigError("sweep", "must be an object")
    keys = sw.get("keys", [sw["key"]] if "key" in sw else None)
    if not keys:
        raise ConfigError("sweep.keys", "sweep must name one or two config keys")
    if isinstance(keys, str):
        keys = [keys]
    # an axis may be a single dotted path or a list of paths that all
    # receive the swept value (e.g. the same trace parameter on a wall
    # and on the arc)
    for i, k in enumerate(keys):
        if isinstance(k, str):
            continue
        if (not isinstance(k, list) or len(k) == 0
                or not all(isinstance(p, str) for p in k)):
            raise ConfigError(f"sweep.keys[{i}]",
                              "axis must be a dotted path or a list of paths")
    if len(keys) > 2:
        raise ConfigError("sweep.keys", "at most two sweep axes supported")
    values = sw.get("values")
    if values is None:
        raise ConfigError("sweep.values", "missing required key")
    if len(keys) == 1 and values and not isinstance(values[0], list):
        values = [values]
    if len(values) != len(keys):
        raise ConfigError("sweep.values", "one value list per swept key")
    for i, vl in enumerate(values):
        if not isinstance(vl, list) or len(vl) == 0:
            raise ConfigError(f"sweep.values[{i}]", "value list must be nonempty")
    return keys, values


def sweep_axes(cfg):
    return _validate_sweep(cfg["sweep"])


def domain_of(cfg):
    dom = cfg["domain"]
    arc = dom.get("arc")
    if arc is not None and isinstance(arc, dict):
        if "plus" in arc or "minus" in arc:
            arc = (arc.get("plus", []), arc.get("minus", []))
        else:
            arc = arc.get("coeffs")
    return build_wedge(float(dom["alpha"]), float(dom["delta_star"]), arc_spec=arc)


def hspec_of(cfg):
    h = cfg["H"]
    v = h["variant"]
    if v == "constant":
        return constant_H(h.get("H0", 0.0))
    if v == "linear":
        return linear_H(h.get("kappa", 0.0), h.get("H0", 0.0))
    coeffs = [float(c) for c in h.get("coeffs", [0.0])]

    def radial(x):
        r = np.hypot(x[:, 0], x[:, 1])
        out = np.zeros_like(r)
        for c in reversed(coeffs):
            out = out * r + c
        return out

    return spatial_H(radial)


def _trace_preset(value, tag):
    if isinstance(value, (int, float)):
        return Dirichlet(float(value))
    if not isinstance(value, dict) or "preset" not in value:
        raise ConfigError(f"bc.{tag}.value", "expected a number or a preset object")
    name = value["preset"]
    if name == "tanh_jump":
        eps = float(value.get("eps", 0.05))
        a = float(value.get("a", -1.0))
        b = float(value.get("b", 1.0))
        if eps <= 0:
            raise ConfigError(f"bc.{tag}.value.eps", "eps must be positive")

        def trace(pts):
            s = np.hypot(pts[:, 0], pts[:, 1])
            return a + (b - a) * 0.5 * (1.0 + np.tanh((s - 3.0 * eps) / eps))

        return Dirichlet(trace)
    if name == "cap":
        R = float(value.get("R", 2.0))

        def cap(pts):
            return np.sqrt(R * R - pts[:, 0] ** 2 - pts[:, 1] ** 2)

        return Dirichlet(cap)
    raise ConfigError(f"bc.{tag}.value.preset", f"unknown preset {name!r}")


def bspec_of(cfg):
    bc = cfg["bc"]
    out = {}
    for tag in ("side_plus", "side_minus", "outer_arc"):
        ent = bc[tag]
        if ent["type"] == "capillary":
            g = float(ent["gamma"])
            if not (0.0 <= g <= math.pi):
                raise ConfigError(f"bc.{tag}.gamma", "gamma must lie in [0, pi]")
            out[tag] = Capillary(g)
        else:
            out[tag] = _trace_preset(ent["value"], tag)
    return BoundarySpec(**out)


def solver_options_of(cfg):
    s = cfg.get("solver", {})
    kwargs = {}
    if "tol_newton" in s:
        kwargs["tol_newton"] = float(s["tol_newton"])
    if "max_iter" in s:
        kwargs["max_iter"] = int(s["max_iter"])
    if "continuation" in s:
        kwargs["continuation"] = bool(s["continuation"])
    return SolverOptions(**kwargs)


def get_by_path(cfg, path):
    node = cfg
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(path, "path not present in config")
        node = node[part]
    return node


def set_by_path(cfg, path, value):
    """Return a deep copy of cfg with the dotted-path key replaced."""
    out = copy.deepcopy(cfg)
    parts = path.split(".")
    node = out
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(path, "path not present in config")
        node = node[part]
    if not isinstance(node, dict) or parts[-1] not in node:
        raise ConfigError(path, "path not present in config")
    node[parts[-1]] = value
    return out


def cap_preset(alpha=math.pi / 3, h_max=0.04, R=2.0, delta_star=1.0):
    """Spherical-cap benchmark: H = -1/R, neutral side walls, exact outer trace."""
    return {
        "name": "cap",
        "domain": {"alpha": alpha, "delta_star": delta_star},
        "mesh": {"h_max": h_max, "grading": 1.0},
        "H": {"variant": "constant", "H0": -1.0 / R},
        "bc": {
            "side_plus": {"type": "capillary", "gamma": math.pi / 2},
            "side_minus": {"type": "capillary", "gamma": math.pi / 2},
            "outer_arc": {
                "type": "dirichlet",
                "value": math.sqrt(R * R - delta_star * delta_star),
            },
        },
        "radial": {"n_theta": 61, "k_max": 6},
    }


def tanh_jump_preset(eps=0.05, h_max=0.02, jump=1.0):
    """Minimal-surface run with a steep wall jump driving fan behavior.

    The plus wall carries Dirichlet data rising from -jump to +jump over
    a width-eps band near the corner; the minus wall is a neutral
    capillary wall; H = 0.
    """
    trace = {"preset": "tanh_jump", "eps": eps, "a": -jump, "b": jump}
    return {
        "name": "tanh_jump",
        "domain": {"alpha": math.pi / 2, "delta_star": 1.0},
        # r_floor caps how small the graded corner cells get; without it the
        # jump produces gradients ~1/cell and the Newton systems become
        # numerically singular (see generate_mesh).
        "mesh": {"h_max": h_max, "grading": 1.0, "r_floor": 0.0025},
        "H": {"variant": "constant", "H0": 0.0},
        "bc": {
            "side_plus": {"type": "dirichlet", "value": dict(trace)},
            "side_minus": {"type": "capillary", "gamma": math.pi / 2},
            # same trace on the arc keeps the junction with SidePlus continuous
            "outer_arc": {"type": "dirichlet", "value": dict(trace)},
        },
        "radial": {"n_theta": 81, "k_max": 8},
    }

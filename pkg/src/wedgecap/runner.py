"""Experiment orchestration and run persistence.

A run is a directory tree; there is no other store.  ``run_solve``
executes one configuration end to end (mesh, solve, radial limits,
classification, admissibility report, optional sandwich check) and
writes:

    config.json           validated input snapshot
    solution.csv          vertex table (x1, x2, f)
    diagnostics.json      solver diagnostics and empirical bounds
    radial_profile.csv    (theta, Rf, error_bar, exponent)
    classification.json   profile verdict and side limit
    condition_report.json admissibility margins per requested check
    profile.svg           Rf(theta) line plot
    sandwich.csv/.json    per-point comparison margins (optional)
    manifest.json         run id, artifact list, versions, timings

``run_sweep`` repeats the pipeline over a 1- or 2-axis grid of config
values, then writes an aggregate CSV and an Rf(theta) overlay plot.
Sub-run profiles are reclassified at a shared tolerance (the coarsest
per-run default) so the aggregate alpha1/alpha2 columns are comparable
across the sweep.

CSV files start with the header comment ``# schema=1`` and format
floats with repr, so re-running an identical config reproduces the
output byte for byte.
"""

import hashlib
import itertools
import json
import os
import platform
import time
from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy

from . import config as cfgmod
from .barriers import barrier_pair, mean_curvature_audit, mu_family, wall_contact_trace
from .comparison import choose_anchor, sandwich_check
from .conditions import (ConditionReport, check_theorem1, check_theorem2,
                         concus_finn_admissible)
from .errors import ConfigError, WedgecapError
from .geometry import generate_mesh
from .radial import classify, default_radii, radial_profile, side_limit
from .solver import empirical_bounds, graph_area, solve
from .svg import line_plot

try:
    from importlib.metadata import version as _dist_version
    _VERSION = _dist_version("wedgecap")
except Exception:
    _VERSION = "unknown"

__all__ = ["RunManifest", "run_solve", "run_sweep", "run_conditions",
           "run_barrier_audit"]

CSV_SCHEMA = "# schema=1"


# ---------------------------------------------------------------- utilities

def _fmt(x):
    # repr floats round-trip exactly and make CSVs bit-stable
    return repr(float(x))


def _jsonable(obj):
    """Recursively convert to JSON-safe values; non-finite floats -> None."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows, comments=()):
    lines = [CSV_SCHEMA]
    lines.extend("# " + c for c in comments)
    lines.append(",".join(header))
    for row in rows:
        cells = []
        for v in row:
            if v is None:
                cells.append("")
            elif isinstance(v, str):
                cells.append(v)
            else:
                cells.append(_fmt(v))
        lines.append(",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _config_hash(cfg):
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:10]


def _versions():
    return {
        "wedgecap": _VERSION,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


@dataclass
class RunManifest:
    """Record of one run: identity, inputs, outputs, provenance."""

    run_id: str
    out_dir: str
    config: dict
    artifacts: list = dc_field(default_factory=list)
    versions: dict = dc_field(default_factory=_versions)
    timings: dict = dc_field(default_factory=dict)
    summary: dict = dc_field(default_factory=dict)
    seed: object = None

    def add(self, relpath):
        if relpath not in self.artifacts:
            self.artifacts.append(relpath)

    def path(self, relpath):
        return os.path.join(self.out_dir, relpath)

    def save(self):
        self.add("manifest.json")
        _write_json(self.path("manifest.json"), {
            "run_id": self.run_id,
            "config": self.config,
            "artifacts": sorted(self.artifacts),
            "versions": self.versions,
            "timings": self.timings,
            "summary": self.summary,
            "seed": self.seed,
        })


def _new_manifest(cfg, out_dir, seed=None):
    base = time.strftime("%Y%m%dT%H%M%S") + "-" + _config_hash(cfg)
    os.makedirs(out_dir, exist_ok=True)
    run_id, n = base, 1
    while True:
        try:
            os.makedirs(os.path.join(out_dir, run_id), exist_ok=False)
            break
        except FileExistsError:
            n += 1
            run_id = "%s-%d" % (base, n)
    return RunManifest(run_id=run_id, out_dir=os.path.join(out_dir, run_id),
                       config=cfg, seed=seed)


def _load(config_src):
    if isinstance(config_src, dict):
        return cfgmod.validate_config(config_src)
    return cfgmod.validate_config(cfgmod.load_config(config_src))


# ------------------------------------------------------------- condition IO

def _wall_gamma(cfg, tag):
    ent = cfg["bc"][tag]
    return float(ent["gamma"]) if ent["type"] == "capillary" else None


def _cf_report(alpha, gamma1, gamma2):
    cf = concus_finn_admissible(alpha, gamma1, gamma2)
    return ConditionReport(
        "concus_finn", bool(cf["admissible"]),
        {"slack": cf["slack"]},
        reason="" if cf["admissible"] else "ConcusFinnViolated")


def _condition_reports(cfg):
    """Evaluate the admissibility checks this configuration calls for.

    The two-sided check needs lambda1/lambda2 in the conditions section
    and supersedes the one-sided check (force both with "one_sided":
    true).  The one-sided check otherwise runs whenever gamma2 is known
    (capillary minus wall or an explicit conditions.gamma2), and the
    Concus-Finn check needs both wall angles.
    """
    sec = cfg.get("conditions", {})
    if not isinstance(sec, dict):
        raise ConfigError("conditions", "must be an object")
    alpha = float(cfg["domain"]["alpha"])
    gamma2 = sec.get("gamma2", _wall_gamma(cfg, "side_minus"))
    gamma1 = sec.get("gamma1", _wall_gamma(cfg, "side_plus"))
    two_sided = "lambda1" in sec or "lambda2" in sec
    reports = {}
    if gamma2 is not None and sec.get("one_sided", not two_sided):
        reports["one_sided"] = check_theorem1(alpha, float(gamma2))
    if two_sided:
        for k in ("lambda1", "lambda2"):
            if k not in sec:
                raise ConfigError(f"conditions.{k}", "missing required key")
        if gamma2 is None:
            raise ConfigError("conditions.gamma2",
                              "two-sided check needs gamma2")
        reports["two_sided"] = check_theorem2(
            alpha, float(gamma2), float(sec["lambda1"]), float(sec["lambda2"]))
    if gamma1 is not None and gamma2 is not None:
        reports["concus_finn"] = _cf_report(alpha, float(gamma1), float(gamma2))
    return reports


def _report_payload(reports):
    out = {}
    for name, rep in reports.items():
        out[name] = {
            "condition": rep.condition,
            "verdict": rep.verdict,
            "holds": rep.holds,
            "margins": rep.margins,
            "reason": rep.reason,
            "chosen": list(rep.chosen) if rep.chosen is not None else None,
        }
    return out


def _outside_theorem(reports):
    return any(rep.holds is False for rep in reports.values())


# ------------------------------------------------------------ the pipeline

def _solve_pipeline(cfg, manifest, prefix="", emit=("solution", "radial",
                                                    "conditions", "svg")):
    """Solve one configuration and write its artifacts under ``prefix``.

    Returns a summary dict with the live objects (field, profile, fits)
    for callers that aggregate across runs.
    """
    def rel(name):
        return prefix + name

    domain = cfgmod.domain_of(cfg)
    mcfg = cfg["mesh"]
    mesh = generate_mesh(
        domain, float(mcfg["h_max"]),
        grading=float(mcfg.get("grading", 1.0)),
        max_vertices=int(mcfg.get("max_vertices", 200000)),
        r_floor=mcfg.get("r_floor"),
    )
    hspec = cfgmod.hspec_of(cfg)
    bspec = cfgmod.bspec_of(cfg)
    opts = cfgmod.solver_options_of(cfg)

    t0 = time.perf_counter()
    field = solve(domain, mesh, hspec, bspec, opts)
    t_solve = time.perf_counter() - t0

    reports = _condition_reports(cfg) if "conditions" in emit else {}
    outside = _outside_theorem(reports)

    rcfg = cfg.get("radial", {})
    t0 = time.perf_counter()
    radii = default_radii(mesh, k_max=int(rcfg.get("k_max", 6)))
    profile = radial_profile(field, n_theta=int(rcfg.get("n_theta", 61)),
                             radii=radii)
    z2 = side_limit(field, "SideMinus")
    verdict = classify(profile, z2, tol=rcfg.get("tol"))
    t_radial = time.perf_counter() - t0

    if "solution" in emit:
        _write_csv(manifest.path(rel("solution.csv")), ("x1", "x2", "f"),
                   np.column_stack([mesh.vertices, field.values]))
        manifest.add(rel("solution.csv"))
        M1, M2 = empirical_bounds(field, hspec)
        diag = {k: v for k, v in field.diagnostics.items()}
        diag.update(
            M1=M1, M2_empirical=M2, graph_area=graph_area(field),
            n_vertices=int(len(mesh.vertices)),
            n_triangles=int(len(mesh.triangles)),
            h_max=mesh.h_max, grading=mesh.grading, r_floor=mesh.r_floor,
        )
        _write_json(manifest.path(rel("diagnostics.json")), diag)
        manifest.add(rel("diagnostics.json"))

    cls_line = ("classification kind=%s value=%s alpha1=%s alpha2=%s "
                "direction=%s tol=%s consistency_gap=%s"
                % (verdict.kind, _fmt(verdict.value), _fmt(verdict.alpha1),
                   _fmt(verdict.alpha2), verdict.direction or "none",
                   _fmt(verdict.tol), _fmt(verdict.consistency_gap)))
    comments = [cls_line,
                "side_limit z2=%s error_bar=%s" % (_fmt(z2.limit),
                                                   _fmt(z2.error_bar))]
    if outside:
        comments.append("outside_theorem=true")
    rows = [(th, fit_l, fit_e, "" if ex is None else _fmt(ex))
            for th, fit_l, fit_e, ex in zip(
                profile.theta_grid, profile.limits, profile.errors,
                profile.fit_exponents)]
    _write_csv(manifest.path(rel("radial_profile.csv")),
               ("theta", "Rf", "error_bar", "exponent"), rows,
               comments=comments)
    manifest.add(rel("radial_profile.csv"))

    _write_json(manifest.path(rel("classification.json")), {
        "kind": verdict.kind, "value": verdict.value,
        "alpha1": verdict.alpha1, "alpha2": verdict.alpha2,
        "direction": verdict.direction, "tol": verdict.tol,
        "reason": verdict.reason,
        "consistency_gap": verdict.consistency_gap,
        "z2": z2.limit, "z2_error_bar": z2.error_bar,
        "outside_theorem": outside,
    })
    manifest.add(rel("classification.json"))

    if "conditions" in emit:
        _write_json(manifest.path(rel("condition_report.json")), {
            "reports": _report_payload(reports),
            "outside_theorem": outside,
        })
        manifest.add(rel("condition_report.json"))

    if "svg" in emit:
        name = cfg.get("name", "run")
        line_plot(manifest.path(rel("profile.svg")),
                  [("Rf", profile.theta_grid, profile.limits)],
                  title="%s: radial limits (%s)" % (name, verdict.kind),
                  xlabel="theta", ylabel="Rf")
        manifest.add(rel("profile.svg"))

    sandwich = None
    if "sandwich" in cfg and ("sandwich" in emit or "solution" in emit):
        sandwich = _sandwich_artifacts(cfg, field, hspec, manifest, rel)

    manifest.timings[prefix + "solve_s"] = t_solve
    manifest.timings[prefix + "radial_s"] = t_radial
    return {
        "field": field, "mesh": mesh, "profile": profile, "z2": z2,
        "classification": verdict, "reports": reports,
        "outside_theorem": outside, "sandwich": sandwich,
    }


def _sandwich_artifacts(cfg, field, hspec, manifest, rel):
    sec = cfg["sandwich"]
    gamma2 = _wall_gamma(cfg, "side_minus")
    if gamma2 is None:
        raise ConfigError("sandwich",
                          "sandwich check needs a capillary minus wall")
    _, M2 = empirical_bounds(field, hspec)
    family = mu_family(float(cfg["domain"]["alpha"]), gamma2,
                       float(sec["mu"]), M2=M2)
    lower, upper = barrier_pair(family)
    w = choose_anchor(field, float(sec["delta"]))
    report = sandwich_check(field, family, (lower, upper), w,
                            float(sec["delta"]))
    _write_csv(manifest.path(rel("sandwich.csv")),
               ("x1", "x2", "margin_lower", "margin_upper"),
               np.column_stack([report.region, report.margins_lower,
                                report.margins_upper]),
               comments=["valid=%s min_gap_lower=%s min_gap_upper=%s"
                         % (str(report.valid).lower(),
                            _fmt(report.min_gap_lower),
                            _fmt(report.min_gap_upper))])
    manifest.add(rel("sandwich.csv"))
    _write_json(manifest.path(rel("sandwich.json")), {
        "valid": report.valid, "vacuous_band": report.vacuous_band,
        "mu": sec["mu"], "delta": report.delta, "radius": report.radius,
        "w": report.w, "f_w": report.f_w, "p_delta": report.p_delta,
        "min_gap_lower": report.min_gap_lower,
        "min_gap_upper": report.min_gap_upper,
        "n_points": int(len(report.region)),
    })
    manifest.add(rel("sandwich.json"))
    return report


# ------------------------------------------------------------- public entry

def run_solve(config_src, out_dir, seed=None, emit=("solution", "radial",
                                                    "conditions", "svg")):
    """Execute one configuration; returns the RunManifest.

    config_src is a path or an already-loaded dict.  Artifacts land in
    out_dir/<run_id>/.
    """
    cfg = _load(config_src)
    manifest = _new_manifest(cfg, out_dir, seed=seed)
    _write_json(manifest.path("config.json"), cfg)
    manifest.add("config.json")
    t0 = time.perf_counter()
    result = _solve_pipeline(cfg, manifest, emit=emit)
    manifest.timings["total_s"] = time.perf_counter() - t0
    verdict = result["classification"]
    manifest.summary = {
        "kind": verdict.kind, "alpha1": verdict.alpha1,
        "alpha2": verdict.alpha2, "value": verdict.value,
        "z2": result["z2"].limit,
        "outside_theorem": result["outside_theorem"],
    }
    if result["sandwich"] is not None:
        manifest.summary["sandwich_valid"] = result["sandwich"].valid
    manifest.save()
    manifest.result = result
    return manifest


def _width_trend(widths):
    if len(widths) < 2:
        return "n/a"
    d = np.diff(widths)
    if np.all(d <= 1e-12):
        return "nonincreasing"
    if np.all(d >= -1e-12):
        return "nondecreasing"
    return "mixed"


def run_sweep(config_src, out_dir, seed=None):
    """Run the sweep grid in the config; returns the coordinator manifest.

    One sub-run per grid point, each in its own subdirectory; failures
    are recorded per row and do not abort the sweep.  The aggregate
    reclassifies every profile at the coarsest per-run tolerance so the
    alpha columns are comparable, and reports the alpha2-alpha1 trend
    for single-axis sweeps.
    """
    cfg = _load(config_src)
    if "sweep" not in cfg:
        raise ConfigError("sweep", "missing required section")
    keys, value_lists = cfgmod.sweep_axes(cfg)
    # an axis may alias several config paths; the first names the column
    axes = [(k,) if isinstance(k, str) else tuple(k) for k in keys]
    labels = [ax[0] for ax in axes]
    manifest = _new_manifest(cfg, out_dir, seed=seed)
    _write_json(manifest.path("config.json"), cfg)
    manifest.add("config.json")

    grid = list(itertools.product(*value_lists))
    t_start = time.perf_counter()
    rows = []
    for i, point in enumerate(grid):
        sub_cfg = {k: v for k, v in cfg.items() if k != "sweep"}
        for axis, val in zip(axes, point):
            for path in axis:
                sub_cfg = cfgmod.set_by_path(sub_cfg, path, val)
        prefix = "sub_%03d%s" % (i, os.sep)
        os.makedirs(manifest.path(prefix), exist_ok=True)
        _write_json(manifest.path(prefix + "config.json"), sub_cfg)
        manifest.add(prefix + "config.json")
        try:
            res = _solve_pipeline(sub_cfg, manifest, prefix=prefix)
        except WedgecapError as exc:
            rows.append({"point": point, "error": type(exc).__name__,
                         "prefix": prefix})
            continue
        rows.append({"point": point, "result": res, "prefix": prefix})

    # shared tolerance = coarsest per-run default, for comparable columns
    tols = [r["result"]["classification"].tol for r in rows if "result" in r]
    common_tol = max(tols) if tols else float("nan")
    agg_rows = []
    overlay = []
    widths = []
    for r in rows:
        if "result" not in r:
            agg_rows.append(tuple(r["point"]) + ("Error:" + r["error"],
                                                 None, None, None))
            continue
        res = r["result"]
        verdict = classify(res["profile"], res["z2"], tol=common_tol)
        is_fan = verdict.kind == "Fan"
        agg_rows.append(tuple(r["point"]) + (
            verdict.kind,
            verdict.alpha1 if is_fan else None,
            verdict.alpha2 if is_fan else None,
            res["z2"].limit,
        ))
        if is_fan:
            widths.append(verdict.alpha2 - verdict.alpha1)
        label = ", ".join("%s=%.4g" % (k.rsplit(".", 1)[-1], v)
                          for k, v in zip(labels, r["point"]))
        overlay.append((label, res["profile"].theta_grid,
                        res["profile"].limits))

    trend = _width_trend(widths) if len(keys) == 1 else "n/a"
    comments = ["common_tol=%s" % _fmt(common_tol)]
    if trend != "n/a":
        comments.append("width_trend=%s" % trend)
    _write_csv(manifest.path("aggregate.csv"),
               tuple(labels) + ("kind", "alpha1", "alpha2", "z2"),
               agg_rows, comments=comments)
    manifest.add("aggregate.csv")
    if overlay:
        line_plot(manifest.path("sweep_overlay.svg"), overlay,
                  title="Rf(theta) across sweep", xlabel="theta",
                  ylabel="Rf")
        manifest.add("sweep_overlay.svg")
    manifest.timings["total_s"] = time.perf_counter() - t_start
    manifest.summary = {
        "n_sub_runs": len(grid),
        "n_failed": sum(1 for r in rows if "result" not in r),
        "common_tol": common_tol,
        "width_trend": trend,
    }
    manifest.save()
    manifest.rows = rows
    return manifest


def run_conditions(config_src):
    """Evaluate the admissibility checks only; no artifacts.

    Returns the dict of ConditionReports keyed by check name.
    """
    cfg = _load(config_src)
    return _condition_reports(cfg)


def run_barrier_audit(config_src, out_dir, grid=120, seed=None):
    """Certify the torus sheets named by the config's sandwich section.

    Writes a CSV of divergence extrema and wall-trace statistics for
    both sheets of the mu-family and returns the manifest.
    """
    cfg = _load(config_src)
    if "sandwich" not in cfg:
        raise ConfigError("sandwich", "barrier audit needs mu (and delta)")
    gamma2 = _wall_gamma(cfg, "side_minus")
    if gamma2 is None:
        sec = cfg.get("conditions", {})
        gamma2 = sec.get("gamma2")
    if gamma2 is None:
        raise ConfigError("bc.side_minus.gamma",
                          "barrier audit needs the minus-wall angle")
    hsec = cfg["H"]
    M2 = abs(float(hsec.get("H0", 0.0))) if hsec["variant"] == "constant" else 0.0
    family = mu_family(float(cfg["domain"]["alpha"]), float(gamma2),
                       float(cfg["sandwich"]["mu"]), M2=M2)
    manifest = _new_manifest(cfg, out_dir, seed=seed)
    _write_json(manifest.path("config.json"), cfg)
    manifest.add("config.json")
    rows = []
    for barrier in barrier_pair(family):
        audit = mean_curvature_audit(barrier, grid=grid)
        trace = wall_contact_trace(barrier, samples=64)
        rows.append((float(barrier.sign), audit.min_div, audit.max_div,
                     audit.max_dev, float(np.mean(trace)),
                     float(np.std(trace))))
    _write_csv(manifest.path("barrier_audit.csv"),
               ("sign", "min_div", "max_div", "max_dev",
                "trace_mean", "trace_std"), rows,
               comments=["mu=%s tau1=%s tau2=%s beta=%s r0=%s"
                         % tuple(_fmt(v) for v in
                                 (family.mu, family.tau1, family.tau2,
                                  family.beta, family.r0))])
    manifest.add("barrier_audit.csv")
    manifest.summary = {
        "r0": family.r0, "beta": family.beta,
        "max_dev": max(r[3] for r in rows),
    }
    manifest.save()
    return manifest

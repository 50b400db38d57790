"""Capillary surfaces over planar wedge domains.

Numerical laboratory for the prescribed mean curvature equation
div(Tf) = 2H(x, f), Tf = grad f / sqrt(1 + |grad f|^2), on a wedge with
corner opening 2*alpha: a graded P1 finite element solver with
capillary and Dirichlet walls, exact toroidal comparison surfaces with
certified curvature bounds, admissibility checkers for the wedge
contact-angle conditions, radial-limit estimation at the corner with a
constant/fan classifier, and two-sided comparison-band verification.
"""

from . import errors
from .geometry import (
    ArcSpec,
    Mesh,
    WedgeDomain,
    build_wedge,
    generate_mesh,
    mesh_quality,
)
from .solver import (
    BoundarySpec,
    Capillary,
    Dirichlet,
    MeanCurvatureSpec,
    ScalarField,
    SolverOptions,
    capillary_flux_defect,
    constant_H,
    empirical_bounds,
    energy,
    graph_area,
    linear_H,
    solve,
    spatial_H,
    unbounded_corner_probe,
)
from .barriers import (
    MuFamily,
    TorusBarrier,
    barrier_gradient,
    barrier_height,
    barrier_pair,
    beta_from_tau,
    contact_inequality_check,
    make_barrier,
    mean_curvature_audit,
    minor_radius,
    modulus_of_continuity,
    mu_family,
    plus_wall_normals_check,
    wall_contact_trace,
)
from .conditions import (
    STRICT_TOL,
    ConditionReport,
    check_theorem1,
    check_theorem2,
    choose_comparison_angles,
    concus_finn_admissible,
)
from .radial import (
    Classification,
    LimitFit,
    RadialProfile,
    classify,
    default_radii,
    estimate_limit,
    fan_profile,
    radial_profile,
    sample_ray,
    side_limit,
)
from .comparison import (
    SandwichReport,
    choose_anchor,
    footprint_region,
    oscillation_on_circle,
    p_of_delta,
    sandwich_check,
    uniform_continuity_probe,
)
from .config import (
    cap_preset,
    load_config,
    tanh_jump_preset,
    validate_config,
)
from .runner import RunManifest, run_solve, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ArcSpec", "Mesh", "WedgeDomain", "build_wedge", "generate_mesh",
    "mesh_quality",
    "BoundarySpec", "Capillary", "Dirichlet", "MeanCurvatureSpec",
    "ScalarField", "SolverOptions", "capillary_flux_defect", "constant_H",
    "empirical_bounds", "energy", "graph_area", "linear_H", "solve",
    "spatial_H", "unbounded_corner_probe",
    "MuFamily", "TorusBarrier", "barrier_gradient", "barrier_height",
    "barrier_pair", "beta_from_tau", "contact_inequality_check",
    "make_barrier", "mean_curvature_audit", "minor_radius",
    "modulus_of_continuity", "mu_family", "plus_wall_normals_check",
    "wall_contact_trace",
    "STRICT_TOL", "ConditionReport", "check_theorem1", "check_theorem2",
    "choose_comparison_angles", "concus_finn_admissible",
    "Classification", "LimitFit", "RadialProfile", "classify",
    "default_radii", "estimate_limit", "fan_profile", "radial_profile",
    "sample_ray", "side_limit",
    "SandwichReport", "choose_anchor", "footprint_region",
    "oscillation_on_circle", "p_of_delta", "sandwich_check",
    "uniform_continuity_probe",
    "cap_preset", "load_config", "tanh_jump_preset", "validate_config",
    "RunManifest", "run_solve", "run_sweep",
    "errors",
    "__version__",
]

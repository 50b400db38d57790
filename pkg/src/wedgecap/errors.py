"""Exception hierarchy shared by all wedgecap modules.

Two branches matter for exit-code mapping in the CLI: ``ValidationError``
(bad inputs, geometric preconditions, config problems) and
``NumericalError`` (a computation that started but did not succeed).
"""

__all__ = [
    "WedgecapError",
    "ValidationError",
    "NumericalError",
    # geometry
    "InvalidAngle",
    "ArcsCross",
    "OutOfRange",
    "TooCoarse",
    "QualityFailure",
    # torus barriers
    "NegativeCurvatureBound",
    "OutsideFootprint",
    "SingularPoint",
    "BandTooNarrow",
    "BetaOutOfRange",
    "WallNotInFootprint",
    "BadAngleOrder",
    "MuOutOfRange",
    "Condition1Violated",
    # conditions
    "ConditionViolated",
    # solver
    "IllPosed",
    "NoConvergence",
    "LineSearchStalled",
    # radial limits
    "RayOutsideDomain",
    "BelowResolution",
    "FitIllConditioned",
    "NoisyProfile",
    # comparison
    "DeltaOutOfRange",
    "BarrierFootprintMiss",
    "PreconditionsUnmet",
    # config / runner
    "ConfigError",
]


class WedgecapError(Exception):
    """Base class for all package errors."""


class ValidationError(WedgecapError):
    """Inputs or preconditions are invalid; nothing was computed."""


class NumericalError(WedgecapError):
    """A numerical procedure ran but failed to reach its goal."""


class InvalidAngle(ValidationError):
    """Half-opening angle outside (0, pi)."""


class ArcsCross(ValidationError):
    """Boundary arcs intersect away from the corner."""


class OutOfRange(ValidationError):
    """Arclength or parameter outside the valid range."""


class TooCoarse(ValidationError):
    """Requested mesh size is not finer than the domain radius."""


class QualityFailure(NumericalError):
    """Mesh generation could not reach the minimum-angle threshold."""


class NegativeCurvatureBound(ValidationError):
    """Curvature bound M2 must be nonnegative."""


class OutsideFootprint(ValidationError):
    """Point lies outside the barrier footprint."""


class SingularPoint(ValidationError):
    """Gradient requested on the zero circle where it blows up."""


class BandTooNarrow(ValidationError):
    """Exclusion band too small for stable numeric differentiation."""


class BetaOutOfRange(ValidationError):
    """Anchor angle outside [-pi/2, pi/2]."""


class WallNotInFootprint(ValidationError):
    """Wall samples leave the barrier footprint."""


class BadAngleOrder(ValidationError):
    """Comparison angles must satisfy tau1 < gamma2 < tau2."""


class MuOutOfRange(ValidationError):
    """mu outside (0, min{gamma2-(pi-2*alpha), 2*alpha-gamma2})."""


class Condition1Violated(ValidationError):
    """The wedge/contact-angle admissibility condition fails."""


class ConditionViolated(ValidationError):
    """Requested angle selection needs a condition that does not hold."""


class IllPosed(ValidationError):
    """No Dirichlet data and no strictly increasing curvature term."""


class NoConvergence(NumericalError):
    """Newton iteration failed; carries the best iterate found.

    Attributes
    ----------
    best : ScalarField or None
        The iterate with the smallest residual norm encountered.
    diagnostics : dict
        Residual history and damping record.
    """

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics or {}


class LineSearchStalled(NumericalError):
    """Backtracking reduced the step below the floor without progress.

    Raised by solve when continuation is disabled; carries the same
    best/diagnostics payload as NoConvergence.
    """

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics or {}


class RayOutsideDomain(ValidationError):
    """Requested ray leaves the wedge."""


class BelowResolution(ValidationError):
    """Requested radius is below the mesh resolution floor."""


class FitIllConditioned(NumericalError):
    """Limit extrapolation has too few or degenerate samples."""


class NoisyProfile(NumericalError):
    """Error bars too large relative to the classification tolerance."""


class DeltaOutOfRange(ValidationError):
    """delta must lie in (0, 1)."""


class BarrierFootprintMiss(ValidationError):
    """Sampling region does not meet the barrier footprint."""


class PreconditionsUnmet(ValidationError):
    """Sandwich preconditions (frames, contact inequalities) not satisfied."""


class ConfigError(ValidationError):
    """Configuration file is malformed; message names the offending key."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"config error at key '{key}'")

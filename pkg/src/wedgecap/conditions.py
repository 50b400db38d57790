"""Admissibility calculators for the wedge contact-angle conditions.

Two regimes are checked.  The one-sided regime requires

    alpha in (pi/4, pi/2]   and   pi - 2 alpha < gamma2 < 2 alpha,

and the two-sided regime with plus-wall bounds lambda1 <= gamma <= lambda2
requires

    0 < lambda2 - lambda1 < 4 alpha   and
    pi - 2 alpha - lambda1 < gamma2 < pi + 2 alpha - lambda2.

The Concus-Finn inequality |pi - gamma1 - gamma2| <= 2 alpha is the
classical necessary condition for bounded solutions with constant contact
angles.  All strict inequalities are evaluated on exact floats; margins
within STRICT_TOL of zero are reported as indeterminate because the
theorems require strictness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionViolated

__all__ = [
    "ConditionReport",
    "STRICT_TOL",
    "check_theorem1",
    "check_theorem2",
    "concus_finn_admissible",
    "choose_comparison_angles",
]

STRICT_TOL = 1e-12


@dataclass
class ConditionReport:
    """Verdict and signed margins for one admissibility check.

    holds is True / False / None, with None meaning indeterminate: some
    margin sits within STRICT_TOL of zero and the underlying condition is
    strict.  ``margins`` maps margin names to signed values (positive =
    satisfied side).  ``chosen`` optionally carries comparison angles
    (tau1, tau2, beta1, beta2) selected under this condition.
    """

    condition: str
    holds: object
    margins: dict = field(default_factory=dict)
    reason: str = ""
    chosen: tuple = None

    @property
    def verdict(self):
        if self.holds is None:
            return "indeterminate"
        return "holds" if self.holds else "fails"


def _strict(margin):
    # 1 satisfied, -1 violated, 0 indeterminate
    if margin > STRICT_TOL:
        return 1
    if margin < -STRICT_TOL:
        return -1
    return 0


def check_theorem1(alpha, gamma2):
    """One-sided admissibility: alpha in (pi/4, pi/2], pi-2a < g2 < 2a."""
    m_lower = gamma2 - (np.pi - 2 * alpha)
    m_upper = 2 * alpha - gamma2
    m_alpha_lo = alpha - np.pi / 4
    m_alpha_hi = np.pi / 2 - alpha  # non-strict upper bound
    margins = {
        "gamma2_lower": float(m_lower),
        "gamma2_upper": float(m_upper),
        "alpha_above_quarter_pi": float(m_alpha_lo),
        "alpha_below_half_pi": float(m_alpha_hi),
    }
    if m_alpha_hi < -STRICT_TOL:
        return ConditionReport("one_sided", False, margins, reason="AlphaTooLarge")
    s_alpha = _strict(m_alpha_lo)
    if s_alpha < 0:
        return ConditionReport("one_sided", False, margins, reason="AlphaTooSmall")
    s_lo, s_hi = _strict(m_lower), _strict(m_upper)
    if s_alpha == 0 or s_lo == 0 or s_hi == 0:
        return ConditionReport("one_sided", None, margins, reason="Indeterminate")
    if s_lo < 0:
        return ConditionReport("one_sided", False, margins, reason="Gamma2TooSmall")
    if s_hi < 0:
        return ConditionReport("one_sided", False, margins, reason="Gamma2TooLarge")
    return ConditionReport("one_sided", True, margins)


def check_theorem2(alpha, gamma2, lambda1, lambda2):
    """Two-sided admissibility with plus-wall bounds lambda1, lambda2."""
    d = lambda2 - lambda1
    m_pre_lo = d
    m_pre_hi = 4 * alpha - d
    m_lower = gamma2 - (np.pi - 2 * alpha - lambda1)
    m_upper = (np.pi + 2 * alpha - lambda2) - gamma2
    margins = {
        "lambda_gap": float(m_pre_lo),
        "lambda_gap_below_4alpha": float(m_pre_hi),
        "gamma2_lower": float(m_lower),
        "gamma2_upper": float(m_upper),
    }
    if not (0.0 < alpha <= np.pi / 2 + STRICT_TOL):
        return ConditionReport("two_sided", False, margins, reason="AlphaOutOfRange")
    states = [_strict(m) for m in (m_pre_lo, m_pre_hi, m_lower, m_upper)]
    if any(s == 0 for s in states):
        return ConditionReport("two_sided", None, margins, reason="Indeterminate")
    if states[0] < 0 or states[1] < 0:
        return ConditionReport("two_sided", False, margins, reason="LambdaGap")
    if states[2] < 0:
        return ConditionReport("two_sided", False, margins, reason="Gamma2TooSmall")
    if states[3] < 0:
        return ConditionReport("two_sided", False, margins, reason="Gamma2TooLarge")
    return ConditionReport("two_sided", True, margins)


def concus_finn_admissible(alpha, gamma1, gamma2):
    """Concus-Finn inequality |pi - gamma1 - gamma2| <= 2 alpha.

    The bound is non-strict: the equality case is admissible with
    slack 0.
    """
    slack = 2 * alpha - abs(np.pi - gamma1 - gamma2)
    return {"admissible": bool(slack >= -STRICT_TOL), "slack": float(slack)}


def choose_comparison_angles(alpha, gamma2, lambdas=None, strategy="midpoint"):
    """Select comparison angles (tau1, tau2, beta1, beta2).

    The midpoint strategy places tau1 halfway between the lower bound and
    gamma2 and tau2 halfway between gamma2 and the upper bound, which
    maximizes both strictness margins symmetrically.  Bounds are
    (pi - 2 alpha, 2 alpha) in the one-sided regime and
    (pi - 2 alpha - lambda1, pi + 2 alpha - lambda2) in the two-sided
    regime, clamped to (0, pi) so the anchor angles stay in range.
    """
    if strategy == "sigma_bounds":
        raise NotImplementedError(
            "sigma_bounds (interval contact data on the plus wall) is an "
            "experimental placeholder with no semantics yet"
        )
    if strategy != "midpoint":
        raise ValueError(f"unknown strategy {strategy!r}")
    if lambdas is None:
        rep = check_theorem1(alpha, gamma2)
        if rep.holds is not True:
            raise ConditionViolated(
                f"one-sided condition {rep.verdict} for alpha={alpha}, "
                f"gamma2={gamma2}"
            )
        lower, upper = np.pi - 2 * alpha, 2 * alpha
    else:
        lambda1, lambda2 = lambdas
        rep = check_theorem2(alpha, gamma2, lambda1, lambda2)
        if rep.holds is not True:
            raise ConditionViolated(
                f"two-sided condition {rep.verdict} for alpha={alpha}, "
                f"gamma2={gamma2}, lambdas={lambdas}"
            )
        lower = np.pi - 2 * alpha - lambda1
        upper = np.pi + 2 * alpha - lambda2
    lower = max(lower, 0.0)
    upper = min(upper, np.pi)
    tau1 = 0.5 * (lower + gamma2)
    tau2 = 0.5 * (gamma2 + upper)
    # avoid a circular import; the beta formulas are one-liners
    beta1 = np.pi / 2 - tau1
    beta2 = tau2 - np.pi / 2
    return float(tau1), float(tau2), float(beta1), float(beta2)

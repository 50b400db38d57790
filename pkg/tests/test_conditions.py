"""Admissibility checkers and comparison-angle selection."""

import numpy as np
import pytest

import wedgecap as wc
from wedgecap.errors import ConditionViolated


# ---------------------------------------------------------------------------
# one-sided admissibility


def test_theorem1_holds_inside_window():
    rep = wc.check_theorem1(np.pi / 3, np.pi / 2)
    assert rep.holds is True
    assert rep.reason == ""
    assert rep.verdict == "holds"
    assert min(rep.margins.values()) > 0


def test_theorem1_alpha_too_small_for_every_gamma2():
    # pi - 2 alpha > 2 alpha when alpha < pi/4: the window is empty
    for g2 in np.linspace(0.05, np.pi - 0.05, 17):
        rep = wc.check_theorem1(np.pi / 5, g2)
        assert rep.holds is False
        assert rep.reason == "AlphaTooSmall"


def test_theorem1_failure_reasons():
    assert wc.check_theorem1(1.7, 1.5).reason == "AlphaTooLarge"
    assert wc.check_theorem1(np.pi / 3, 0.2).reason == "Gamma2TooSmall"
    assert wc.check_theorem1(np.pi / 3, 3.0).reason == "Gamma2TooLarge"


def test_theorem1_boundary_is_indeterminate():
    # gamma2 exactly at the upper endpoint 2 alpha
    rep = wc.check_theorem1(0.9, 1.8)
    assert rep.holds is None
    assert rep.verdict == "indeterminate"


# ---------------------------------------------------------------------------
# two-sided admissibility


def test_theorem2_reference_case():
    rep = wc.check_theorem2(np.pi / 6, 7 * np.pi / 9, 0.0, np.pi / 2)
    assert rep.holds is True
    assert min(rep.margins.values()) > 0


def test_theorem2_failure_reasons():
    a = np.pi / 6
    assert wc.check_theorem2(a, 7 * np.pi / 9, 0.5, 0.2).reason == "LambdaGap"
    assert wc.check_theorem2(a, 7 * np.pi / 9, 0.0, 4 * a + 0.1).reason == "LambdaGap"
    assert wc.check_theorem2(a, 0.1, 0.0, np.pi / 2).reason == "Gamma2TooSmall"
    assert wc.check_theorem2(a, 3.1, 0.0, np.pi / 2).reason == "Gamma2TooLarge"
    assert wc.check_theorem2(2.0, np.pi / 2, 0.0, 0.5).reason == "AlphaOutOfRange"


def test_theorem2_boundary_is_indeterminate():
    a, l1, l2 = np.pi / 6, 0.0, np.pi / 2
    g2 = np.pi + 2 * a - l2  # exactly the upper endpoint
    rep = wc.check_theorem2(a, g2, l1, l2)
    assert rep.holds is None


# ---------------------------------------------------------------------------
# Concus-Finn


def test_concus_finn_interior():
    rep = wc.concus_finn_admissible(np.pi / 3, np.pi / 2, np.pi / 2)
    assert rep["admissible"] is True
    assert rep["slack"] == pytest.approx(2 * np.pi / 3 - 0.0)


def test_concus_finn_equality_exact_zero_slack():
    # pi - pi/2 - 0 == pi/2 == 2 * (pi/4) exactly in floating point
    rep = wc.concus_finn_admissible(np.pi / 4, np.pi / 2, 0.0)
    assert rep["admissible"] is True
    assert rep["slack"] == 0.0


def test_concus_finn_violated():
    rep = wc.concus_finn_admissible(np.pi / 6, np.pi / 6, np.pi / 6)
    assert rep["admissible"] is False
    assert rep["slack"] < 0


# ---------------------------------------------------------------------------
# comparison-angle selection


def test_choose_comparison_angles_midpoint():
    tau1, tau2, beta1, beta2 = wc.choose_comparison_angles(np.pi / 3, np.pi / 2)
    assert tau1 == pytest.approx(5 * np.pi / 12)
    assert tau2 == pytest.approx(7 * np.pi / 12)
    assert beta1 == pytest.approx(np.pi / 12)
    assert beta2 == pytest.approx(np.pi / 12)


def test_choose_comparison_angles_straddle_gamma2():
    rng = np.random.default_rng(11)
    for _ in range(50):
        alpha = rng.uniform(np.pi / 4 + 0.02, np.pi / 2)
        lo, hi = np.pi - 2 * alpha, 2 * alpha
        gamma2 = rng.uniform(lo + 0.02, hi - 0.02)
        tau1, tau2, beta1, beta2 = wc.choose_comparison_angles(alpha, gamma2)
        assert tau1 < gamma2 < tau2
        assert beta1 == pytest.approx(np.pi / 2 - tau1)
        assert beta2 == pytest.approx(tau2 - np.pi / 2)


def test_choose_comparison_angles_two_sided():
    tau1, tau2, _, _ = wc.choose_comparison_angles(
        np.pi / 6, 7 * np.pi / 9, lambdas=(0.0, np.pi / 2))
    assert tau1 < 7 * np.pi / 9 < tau2


def test_choose_comparison_angles_guards():
    with pytest.raises(ConditionViolated):
        wc.choose_comparison_angles(np.pi / 5, np.pi / 2)
    with pytest.raises(NotImplementedError):
        wc.choose_comparison_angles(np.pi / 3, np.pi / 2, strategy="sigma_bounds")
    with pytest.raises(ValueError):
        wc.choose_comparison_angles(np.pi / 3, np.pi / 2, strategy="nope")


def test_condition_report_margin_keys():
    rep1 = wc.check_theorem1(np.pi / 3, np.pi / 2)
    assert set(rep1.margins) == {
        "gamma2_lower", "gamma2_upper",
        "alpha_above_quarter_pi", "alpha_below_half_pi",
    }
    rep2 = wc.check_theorem2(np.pi / 6, 7 * np.pi / 9, 0.0, np.pi / 2)
    assert set(rep2.margins) == {
        "lambda_gap", "lambda_gap_below_4alpha",
        "gamma2_lower", "gamma2_upper",
    }

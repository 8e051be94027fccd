"""Attainability verdicts: decision table, thresholds, constants resolution."""

import dataclasses
import math

import numpy as np
import pytest

import attainkit as ak
from attainkit import (
    ConstantSet,
    CurveParams,
    ParamError,
    ProblemParams,
    Reason,
    classify,
    d_value,
    fractional_constant,
    gamma_threshold_exponent,
    kappa_multiplier,
    maximize_halfline,
    objective_curve,
    resolve_constants,
    threshold_alpha,
    threshold_curve,
)

P_STAR_5 = 10.0 / 3.0


def test_threshold_zero_above_upper_gamma(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=3.5)
    assert threshold_alpha(pp, constants_crit5) == 0.0


def test_threshold_closed_form_at_upper_gamma(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=P_STAR_5)
    C = kappa_multiplier(pp, constants_crit5)
    assert threshold_alpha(pp, constants_crit5) == pytest.approx(
        2.0 / (P_STAR_5 * C), rel=1e-12)


@pytest.mark.parametrize("gamma", [1.2, 2.0])
def test_threshold_flat_band_low_gamma(crit5, constants_crit5, gamma):
    pp = dataclasses.replace(crit5, gamma=gamma)
    C = kappa_multiplier(pp, constants_crit5)
    assert threshold_alpha(pp, constants_crit5) == pytest.approx(1.0 / C, rel=1e-12)


def test_threshold_interior_below_flat_band(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=2.2)
    C = kappa_multiplier(pp, constants_crit5)
    thr = threshold_alpha(pp, constants_crit5)
    assert 0.0 < thr < 1.0 / C


def test_threshold_subcritical_closed_form_at_gamma_c(sub224, constants_sub224):
    gamma_c = gamma_threshold_exponent(2, 2.0, 4.0)
    pp = dataclasses.replace(sub224, gamma=gamma_c)
    thr = threshold_alpha(pp, constants_sub224)
    B = constants_sub224.interpolation.value
    assert thr == pytest.approx(2.0 / (gamma_c * B), rel=1e-12)


def test_interior_band_alpha_sweep(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=2.2)
    thr = threshold_alpha(pp, constants_crit5)
    below = classify(dataclasses.replace(pp, alpha=0.5 * thr), constants_crit5)
    assert (below.attained, below.reason) == (False, Reason.BELOW_THRESHOLD)
    assert below.closed_form_D == 1.0 and below.D == pytest.approx(1.0, abs=1e-9)
    # equality wins on the interior band
    at = classify(dataclasses.replace(pp, alpha=thr), constants_crit5)
    assert (at.attained, at.reason) == (True, Reason.UNIQUE_INTERIOR_MAX)
    above = classify(dataclasses.replace(pp, alpha=2.0 * thr), constants_crit5)
    assert above.attained and above.t_star is not None
    assert above.D > 1.0


def test_upper_boundary_equality_loses_critical(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=P_STAR_5)
    thr = threshold_alpha(pp, constants_crit5)
    at = classify(dataclasses.replace(pp, alpha=thr), constants_crit5)
    assert not at.attained
    assert at.reason == Reason.AT_THRESHOLD_CRITICAL_GAMMA_EQ_PSTAR
    assert at.closed_form_D == 1.0
    above = classify(dataclasses.replace(pp, alpha=thr * (1 + 1e-6)), constants_crit5)
    assert above.attained


def test_upper_boundary_equality_loses_subcritical(sub224, constants_sub224):
    gamma_c = gamma_threshold_exponent(2, 2.0, 4.0)
    pp = dataclasses.replace(sub224, gamma=gamma_c)
    thr = threshold_alpha(pp, constants_sub224)
    at = classify(dataclasses.replace(pp, alpha=thr), constants_sub224)
    assert not at.attained
    assert at.reason == Reason.AT_THRESHOLD_GAMMA_EQ_GAMMA_C


def test_gamma_snap_to_upper_boundary(crit5, constants_crit5):
    exact = dataclasses.replace(crit5, gamma=P_STAR_5)
    snapped = dataclasses.replace(crit5, gamma=P_STAR_5 * (1 + 1e-13))
    assert threshold_alpha(snapped, constants_crit5) == threshold_alpha(
        exact, constants_crit5)


def test_alpha_snap_to_threshold(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=P_STAR_5)
    thr = threshold_alpha(pp, constants_crit5)
    v = classify(dataclasses.replace(pp, alpha=thr * (1 + 1e-12)), constants_crit5)
    assert v.reason == Reason.AT_THRESHOLD_CRITICAL_GAMMA_EQ_PSTAR


@pytest.mark.parametrize("gamma", [1.5, 2.0])
@pytest.mark.parametrize("alpha_x_c", [0.25, 4.0])
def test_convexity_band_never_attained(crit5, constants_crit5, gamma, alpha_x_c):
    C = kappa_multiplier(crit5, constants_crit5)
    pp = dataclasses.replace(crit5, gamma=gamma, alpha=alpha_x_c / C)
    v = classify(pp, constants_crit5)
    assert not v.attained
    assert v.reason == Reason.CONVEXITY_EXCLUSION
    assert v.closed_form_D == pytest.approx(max(1.0, alpha_x_c), rel=1e-12)
    assert v.D == pytest.approx(max(1.0, alpha_x_c), abs=1e-9)


def test_above_upper_gamma_attained_for_every_weight(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=3.5, alpha=1e-6)
    v = classify(pp, constants_crit5)
    assert v.attained and v.reason == Reason.UNIQUE_INTERIOR_MAX
    assert v.threshold == 0.0
    # the optimum hides far below grid resolution; the stationary-point
    # fallback must still locate it
    assert v.t_star is not None and 0.0 < v.t_star < 1e-100


def test_energy_space_obstruction_beats_everything(constants_crit3):
    for alpha in (2.0, 0.0):
        pp = ProblemParams.local_critical(N=3, p=2.0, gamma=3.0, alpha=alpha)
        v = classify(pp, constants_crit3)
        assert not v.attained
        assert v.reason == Reason.SOBOLEV_NOT_ATTAINED
        assert v.t_star is None


def test_energy_space_obstruction_at_dimension_boundary():
    pp = ProblemParams.local_critical(N=4, p=2.0, gamma=3.0, alpha=1.0)
    v = classify(pp)
    assert v.reason == Reason.SOBOLEV_NOT_ATTAINED


def test_alpha_zero_refused(crit5, constants_crit5):
    v = classify(dataclasses.replace(crit5, alpha=0.0), constants_crit5)
    assert not v.attained
    assert v.reason == Reason.ALPHA_ZERO
    assert v.D == pytest.approx(1.0, abs=1e-12)


def test_fractional_low_gamma_convexity():
    pp = ProblemParams.fractional_critical(N=5, s=0.6, gamma=1.0, alpha=1.0)
    cset = ConstantSet(sobolev=None, interpolation=None,
                       fractional=fractional_constant(1.7))
    v = classify(pp, cset)
    assert not v.attained
    assert v.reason == Reason.CONVEXITY_EXCLUSION
    assert v.D == pytest.approx(1.7, abs=1e-9)
    assert threshold_alpha(pp, cset) == pytest.approx(1.0 / 1.7, rel=1e-12)


def test_d_value_matches_direct_optimization(crit5, constants_crit5):
    pp = dataclasses.replace(crit5, gamma=2.2, alpha=180.0)
    C = kappa_multiplier(pp, constants_crit5)
    cp = CurveParams.from_problem(pp, C)
    direct = maximize_halfline(objective_curve(cp)).value
    assert d_value(pp, constants_crit5) == direct
    assert classify(pp, constants_crit5).D == direct


def test_threshold_curve_monotone(crit5, constants_crit5):
    grid = np.linspace(0.5, 3.5, 60)
    tc = threshold_curve(crit5, grid, constants_crit5)
    assert list(tc.gammas) == sorted(tc.gammas)
    diffs = np.diff(np.asarray(tc.thresholds))
    assert np.all(diffs <= 0.0)
    assert tc.thresholds[-1] == 0.0  # beyond the upper boundary
    assert tc.strictly_decreasing_interior


def test_resolve_constants_fills_only_whats_needed(crit5, constants_crit5):
    assert constants_crit5.sobolev is not None
    assert constants_crit5.interpolation is None
    assert constants_crit5.fractional is None
    # already-resolved sets pass through unchanged
    again = resolve_constants(crit5, constants_crit5)
    assert again.sobolev is constants_crit5.sobolev


def test_resolve_constants_fractional_requires_user_value():
    pp = ProblemParams.fractional_critical(N=5, s=0.6, gamma=1.0, alpha=1.0)
    with pytest.raises(ParamError):
        resolve_constants(pp)


def test_verdict_is_frozen(crit5, constants_crit5):
    v = classify(crit5, constants_crit5)
    with pytest.raises(dataclasses.FrozenInstanceError):
        v.attained = not v.attained


def test_reason_values_are_stable_strings():
    assert {r.value for r in Reason} == {
        "UniqueInteriorMax", "SobolevNotAttained", "BelowThreshold",
        "AtThresholdCriticalGammaEqPstar", "AtThresholdGammaEqGammaC",
        "ConvexityExclusion", "AlphaZero",
    }

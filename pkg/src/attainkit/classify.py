"""Attainability decision tables for the constrained maximization problem.

Given validated problem parameters and the relevant sharp constant, this
module answers the three questions the one-dimensional reduction makes
answerable exactly:

* ``threshold_alpha`` -- the smallest weight (if any) at which maximizers
  can exist, computed from the infimum of the ratio curve divided by the
  sharp constant, with closed forms used where they exist;
* ``d_value`` -- the supremum of the functional, computed from the maximum
  of the objective curve, cross-checked against closed forms;
* ``classify`` -- the full verdict: attained or not, why, where.

Boundary cases (gamma at an endpoint, alpha exactly at the threshold) are
decided analytically by the decision table, never by comparing two nearly
equal floating-point optimizer outputs: the numeric layer flags such ties
as marginal and this module breaks them by rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .constants import SharpConstant, gns_constant_estimate, sobolev_constant
from .curves import (
    CurveParams,
    objective_curve,
    ratio_curve,
    stationary_points,
    value_f,
)
from .errors import NumericalError, ParamError
from .halfline import maximize_halfline, minimize_halfline
from .params import (
    Exponents,
    ProblemParams,
    Regime,
    exponents,
    extremal_in_energy_space,
)

#: relative slack when comparing gamma against an exponent boundary
GAMMA_BOUNDARY_RTOL = 1e-12
#: relative slack when comparing alpha against the computed threshold
ALPHA_THRESHOLD_RTOL = 1e-11
#: required relative agreement between numeric and closed-form values
CLOSED_FORM_RTOL = 1e-9


class Reason(Enum):
    """Why a verdict holds.  Values double as the wire/JSON labels."""

    UNIQUE_INTERIOR_MAX = "UniqueInteriorMax"
    SOBOLEV_NOT_ATTAINED = "SobolevNotAttained"
    BELOW_THRESHOLD = "BelowThreshold"
    AT_THRESHOLD_CRITICAL_GAMMA_EQ_PSTAR = "AtThresholdCriticalGammaEqPstar"
    AT_THRESHOLD_GAMMA_EQ_GAMMA_C = "AtThresholdGammaEqGammaC"
    CONVEXITY_EXCLUSION = "ConvexityExclusion"
    ALPHA_ZERO = "AlphaZero"


@dataclass(frozen=True)
class Verdict:
    """Complete answer for one parameter point.

    attained       whether a maximizer exists
    reason         the decision-table rule that fired
    D              supremum of the functional (numeric, curve-based)
    threshold      critical weight alpha(gamma) (0 when none)
    t_star         gradient-to-mass ratio of a maximizer, when one exists;
                   may also be populated for marginal boundary ties
    closed_form_D  closed-form value of D when the table provides one;
                   always within CLOSED_FORM_RTOL of D
    regime         which of the four problem families was classified
    """

    attained: bool
    reason: Reason
    D: float
    threshold: float
    t_star: float | None
    closed_form_D: float | None
    regime: Regime


@dataclass(frozen=True)
class ConstantSet:
    """Sharp constants a classification may need.

    sobolev        S, the sharp Sobolev constant (critical local regime)
    interpolation  B, the sharp interpolation constant (subcritical local)
    fractional     the user-supplied fractional constant (both fractional
                   regimes; there is no built-in way to compute it)
    """

    sobolev: SharpConstant | None = None
    interpolation: SharpConstant | None = None
    fractional: SharpConstant | None = None


def resolve_constants(params: ProblemParams,
                      constants: ConstantSet | None = None,
                      *,
                      quadrature_resolution: int = 64,
                      ascent_budget: int = 1200,
                      ascent_grid_n: int = 200) -> ConstantSet:
    """Fill in whichever constant the regime needs, if it is computable.

    The local constants are computed on demand (Sobolev by quadrature,
    interpolation by a coordinate-ascent lower bound at a moderate default
    budget -- pass a precomputed ``ConstantSet`` when more accuracy is
    needed).  Fractional constants cannot be computed here and must be
    supplied; a missing one raises ``ParamError``.
    """
    regime = params.regime()
    cs = constants if constants is not None else ConstantSet()
    if regime is Regime.CRITICAL_LOCAL:
        if cs.sobolev is None:
            cs = replace(cs, sobolev=sobolev_constant(
                params.N, params.p, resolution=quadrature_resolution))
    elif regime is Regime.SUBCRITICAL_LOCAL:
        if cs.interpolation is None:
            cs = replace(cs, interpolation=gns_constant_estimate(
                params.N, params.p, params.q,
                budget=ascent_budget, grid_n=ascent_grid_n))
    else:
        if cs.fractional is None:
            raise ParamError(
                "constants",
                "fractional regimes need a user-supplied fractional "
                "constant in ConstantSet.fractional")
    return cs


def kappa_multiplier(params: ProblemParams, constants: ConstantSet) -> float:
    """The factor C in kappa = alpha * C for the regime of ``params``.

    Critical local: S raised to the critical exponent.  Subcritical local:
    the interpolation constant.  Fractional: the supplied constant itself.
    """
    regime = params.regime()
    exps = exponents(params)
    if regime is Regime.CRITICAL_LOCAL:
        if constants.sobolev is None:
            raise ParamError("constants", "critical local regime needs ConstantSet.sobolev")
        return constants.sobolev.value ** exps.crit
    if regime is Regime.SUBCRITICAL_LOCAL:
        if constants.interpolation is None:
            raise ParamError("constants", "subcritical local regime needs ConstantSet.interpolation")
        return constants.interpolation.value
    if constants.fractional is None:
        raise ParamError("constants", "fractional regimes need ConstantSet.fractional")
    return constants.fractional.value


def _close(x: float, y: float, rtol: float) -> bool:
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


def _gamma_band(gamma: float, exps: Exponents, critical: bool) -> str:
    """Locate gamma among the regime's decision boundaries.

    Returns one of "le_base", "interior", "eq_upper", "gt_upper", where
    the upper boundary is the critical exponent (critical regimes) or the
    gamma-threshold exponent (subcritical regimes).  Boundary equality is
    decided with a relative snap so that a user-entered gamma meant to hit
    an irrational boundary exactly is not misrouted by one ulp.
    """
    upper = exps.crit if critical else exps.gamma_crit
    if _close(gamma, upper, GAMMA_BOUNDARY_RTOL):
        return "eq_upper"
    if gamma > upper:
        return "gt_upper"
    if critical and (gamma < exps.base or _close(gamma, exps.base, GAMMA_BOUNDARY_RTOL)):
        return "le_base"
    return "interior"


def _alpha_vs_threshold(alpha: float, threshold: float) -> int:
    """-1 below, 0 at (within snap), +1 above the threshold."""
    if _close(alpha, threshold, ALPHA_THRESHOLD_RTOL):
        return 0
    return -1 if alpha < threshold else 1


def threshold_alpha(params: ProblemParams,
                    constants: ConstantSet | None = None) -> float:
    """The critical weight alpha(gamma): infimum of the ratio curve over C.

    Closed forms are used where the decision table provides them (zero
    above the upper gamma boundary, base/(upper*C) on it, 1/C at or below
    the base exponent in critical regimes); elsewhere the infimum is
    computed numerically.  The result is 0 exactly when every positive
    weight admits a maximizer.
    """
    regime = params.regime()
    exps = exponents(params)
    constants = resolve_constants(params, constants)
    C = kappa_multiplier(params, constants)
    if C <= 0:
        raise ParamError("constants", f"normalizing constant must be positive, got {C}")
    band = _gamma_band(params.gamma, exps, regime.is_critical)
    if band == "gt_upper":
        return 0.0
    if band == "eq_upper":
        upper = exps.crit if regime.is_critical else exps.gamma_crit
        return exps.base / (upper * C)
    if band == "le_base" and regime.is_critical:
        return 1.0 / C
    # interior band (and subcritical gamma <= base): numeric infimum
    cp = CurveParams.from_problem(params, C, alpha=0.0)
    opt = minimize_halfline(ratio_curve(cp))
    if not math.isfinite(opt.value) or opt.value <= 0:
        raise NumericalError(f"ratio-curve infimum came out {opt.value}")
    return opt.value / C


def d_value(params: ProblemParams,
            constants: ConstantSet | None = None) -> float:
    """Supremum of the functional: maximum of the objective curve."""
    constants = resolve_constants(params, constants)
    C = kappa_multiplier(params, constants)
    cp = CurveParams.from_problem(params, C)
    opt = maximize_halfline(objective_curve(cp))
    if not math.isfinite(opt.value) or opt.value <= 0:
        raise NumericalError(f"objective-curve supremum came out {opt.value}")
    return opt.value


def _closed_form_d(params: ProblemParams, exps: Exponents, regime: Regime,
                   band: str, rel_alpha: int, C: float) -> float | None:
    """Closed-form D where the decision table provides one.

    Critical gamma <= base: max(1, kappa) at every alpha.  Any regime at
    or below its threshold (on or inside the upper gamma boundary): 1.
    """
    if regime.is_critical and band == "le_base":
        return max(1.0, params.alpha * C)
    if band in ("eq_upper", "interior") and rel_alpha <= 0:
        return 1.0
    return None


def _attained_t_star(cp: CurveParams) -> float:
    """Maximizer location for a verdict the table says is attained.

    Uses the objective-curve maximizer; at an exact threshold tie the
    optimizer reports a marginal result whose candidate location is still
    the interior maximizer.  When the grid scan resolves nothing at all --
    tiny weights push the maximum to t values whose excess over the
    boundary limit is far below double precision -- the stationary points
    of f are located by log-domain derivative root-finding instead, and
    the one with the largest curve value wins.
    """
    opt = maximize_halfline(objective_curve(cp))
    if opt.argopt is not None:
        return opt.argopt
    roots = stationary_points(cp)
    if not roots:
        raise NumericalError(
            "verdict says attained but no interior stationary point was found")
    return max(roots, key=lambda t: value_f(cp, t))


def classify(params: ProblemParams,
             constants: ConstantSet | None = None) -> Verdict:
    """Full attainability verdict for one parameter point.

    Decision order: the energy-space obstruction in critical regimes
    (the optimal bubble fails to be admissible, so no weight or exponent
    rescues attainment) is checked first; a zero weight is refused next;
    then gamma is located against the regime's boundaries and alpha
    against the threshold, with equalities resolved by the analytic table
    rather than by floating-point optimizer ties.
    """
    regime = params.regime()
    exps = exponents(params)
    constants = resolve_constants(params, constants)
    C = kappa_multiplier(params, constants)
    thr = threshold_alpha(params, constants)
    D = d_value(params, constants)
    band = _gamma_band(params.gamma, exps, regime.is_critical)
    rel_alpha = _alpha_vs_threshold(params.alpha, thr)
    cp = CurveParams.from_problem(params, C)

    def verdict(attained: bool, reason: Reason,
                t_star: float | None, cf: float | None) -> Verdict:
        if cf is not None and not _close(D, cf, CLOSED_FORM_RTOL):
            raise NumericalError(
                f"numeric D={D!r} disagrees with closed form {cf!r} "
                f"beyond relative {CLOSED_FORM_RTOL}")
        return Verdict(attained=attained, reason=reason, D=D, threshold=thr,
                       t_star=t_star, closed_form_D=cf, regime=regime)

    cf = _closed_form_d(params, exps, regime, band, rel_alpha, C)

    if regime.is_critical and not extremal_in_energy_space(params):
        return verdict(False, Reason.SOBOLEV_NOT_ATTAINED, None, cf)
    if params.alpha == 0.0:
        return verdict(False, Reason.ALPHA_ZERO, None, 1.0)

    if band == "gt_upper":
        # threshold is zero: every positive weight admits a maximizer
        return verdict(True, Reason.UNIQUE_INTERIOR_MAX, _attained_t_star(cp), cf)
    if band == "le_base":
        # critical regimes only: convexity excludes attainment at every alpha
        return verdict(False, Reason.CONVEXITY_EXCLUSION, None, cf)
    if band == "eq_upper":
        # on the upper gamma boundary equality with the threshold loses
        if rel_alpha > 0:
            return verdict(True, Reason.UNIQUE_INTERIOR_MAX, _attained_t_star(cp), cf)
        if rel_alpha == 0:
            at = (Reason.AT_THRESHOLD_CRITICAL_GAMMA_EQ_PSTAR if regime.is_critical
                  else Reason.AT_THRESHOLD_GAMMA_EQ_GAMMA_C)
            return verdict(False, at, None, cf)
        return verdict(False, Reason.BELOW_THRESHOLD, None, cf)
    # interior band: equality with the threshold wins
    if rel_alpha >= 0:
        return verdict(True, Reason.UNIQUE_INTERIOR_MAX, _attained_t_star(cp), cf)
    return verdict(False, Reason.BELOW_THRESHOLD, None, cf)


@dataclass(frozen=True)
class ThresholdCurve:
    """Sampled map gamma -> alpha(gamma) along a sorted grid.

    strictly_decreasing_interior reports whether consecutive samples with
    both gammas strictly between the base exponent and the upper boundary
    decreased strictly.
    """

    gammas: tuple[float, ...]
    thresholds: tuple[float, ...]
    strictly_decreasing_interior: bool
    meta: dict = field(default_factory=dict, compare=False)


def threshold_curve(params: ProblemParams, gamma_grid,
                    constants: ConstantSet | None = None) -> ThresholdCurve:
    """Evaluate the threshold along a gamma grid and check its shape.

    The threshold is non-increasing in gamma; a violation beyond rounding
    slack raises ``NumericalError``.  Strict decrease is flagged on the
    open interval between the base exponent and the upper boundary.
    """
    gammas = [float(g) for g in gamma_grid]
    if not gammas:
        raise ParamError("gamma_grid", "gamma grid must be non-empty")
    if any(g <= 0 for g in gammas) or any(b > a for a, b in zip(gammas[1:], gammas)):
        raise ParamError("gamma_grid", "gamma grid must be sorted and positive")
    regime = params.regime()
    exps = exponents(params)
    constants = resolve_constants(params, constants)
    values = [threshold_alpha(replace(params, gamma=g), constants) for g in gammas]
    for (g0, v0), (g1, v1) in zip(zip(gammas, values), zip(gammas[1:], values[1:])):
        if v1 > v0 + 1e-9 * max(1.0, abs(v0)):
            raise NumericalError(
                f"threshold failed to be non-increasing: alpha({g0})={v0} "
                f"< alpha({g1})={v1}")
    upper = exps.crit if regime.is_critical else exps.gamma_crit
    interior = [(v0, v1) for g0, v0, g1, v1
                in zip(gammas, values, gammas[1:], values[1:])
                if exps.base < g0 and g1 < upper]
    strict = bool(interior) and all(v1 < v0 for v0, v1 in interior)
    return ThresholdCurve(
        gammas=tuple(gammas), thresholds=tuple(values),
        strictly_decreasing_interior=strict,
        meta={"base": exps.base, "upper": upper, "regime": regime.name})

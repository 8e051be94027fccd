"""One-dimensional reduction curves on the half-line.

Every instance of the maximization problem reduces, along the scaling ray
through the optimal bubble profile, to elementary curves of a single
variable t > 0 (t is the gradient-to-mass ratio ||grad u||_p^gamma /
||u||_p^gamma of a trial function):

    objective curve   f(t) = [ (1+t)^a + kappa * t^c ] / (1+t)^b
    ratio curve       g(t) = (1+t)^a * [ (1+t)^pgamma - 1 ] / t^c

with exponents

    a = (q - p)/gamma,   b = q/gamma,   c = gamma_crit/gamma,
    pgamma = p/gamma,    kappa = alpha * (sharp constant normalization),

satisfying a = b - pgamma, 0 < c <= b.  The problem's supremum is
sup_t f(t) and the attainability threshold weight is inf_t g(t) divided by
the normalization.  The critical case is exactly c = b.

The substitution s = t/(1+t) compactifies the half-line to (0,1):

    k(s) = f(t(s)) = (1-s)^pgamma + kappa * s^c * (1-s)^(b-c)
    l(s) = g(t(s)) = s^(-c) * (1-s)^(c-b) * (1 - (1-s)^pgamma)

All evaluations run in log space (log1p/expm1), which is cancellation-free
for t near 0 and s near 1; in particular (1+t)^pgamma - 1 is computed as
expm1(pgamma*log1p(t)), exact to machine precision for all t.

``h_factor`` and ``m_factor`` are elementary expressions with the same sign
as f'(t) and l'(s) respectively; the classifier reasons about monotonicity
through them rather than through finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import NumericalError, ParamError
from .params import ProblemParams, Regime, exponents


def s_of_t(t):
    """Compactifying change of variable (0, inf) -> (0, 1)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    out = t / (1.0 + t)
    return float(out) if out.ndim == 0 else out


def t_of_s(s):
    """Inverse of :func:`s_of_t`, (0, 1) -> (0, inf)."""
    s = np.asarray(s, dtype=float)
    if np.any((s <= 0) | (s >= 1)):
        raise ValueError("s must lie in (0, 1)")
    out = s / (1.0 - s)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CurveParams:
    """Exponent tuple (a, b, c, kappa, pgamma) of one curve family.

    Invariants enforced: a = b - pgamma exactly, 0 < c <= b, kappa >= 0,
    pgamma > 0.  Use :meth:`make` or :meth:`from_problem`, which build ``a``
    from the other two so the identity holds to the last bit.
    """

    a: float
    b: float
    c: float
    kappa: float
    pgamma: float

    def __post_init__(self):
        for name in ("a", "b", "c", "kappa", "pgamma"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ParamError(name, f"{name} must be finite, got {v!r}")
        if self.pgamma <= 0:
            raise ParamError("pgamma", f"pgamma must be positive, got {self.pgamma}")
        if self.kappa < 0:
            raise ParamError("kappa", f"kappa must be nonnegative, got {self.kappa}")
        if not 0 < self.c <= self.b:
            raise ParamError("c", f"need 0 < c <= b, got c={self.c}, b={self.b}")
        if self.a != self.b - self.pgamma:
            raise ParamError("a", "a must equal b - pgamma exactly; use CurveParams.make")

    @classmethod
    def make(cls, b: float, c: float, kappa: float, pgamma: float) -> "CurveParams":
        return cls(a=b - pgamma, b=b, c=c, kappa=kappa, pgamma=pgamma)

    @classmethod
    def from_problem(cls, params: ProblemParams, constant: float,
                     alpha: float | None = None) -> "CurveParams":
        """Curve exponents of a validated problem.

        ``constant`` is the multiplicative normalization entering
        kappa = alpha * constant: the critical local case takes S^(p*) (the
        sharp Sobolev constant raised to p*), the subcritical local case the
        sharp interpolation constant, and the fractional cases the
        user-supplied fractional constant.
        """
        regime = params.regime()
        exps = exponents(params)
        gamma = params.gamma
        al = params.alpha if alpha is None else alpha
        if constant < 0 or not math.isfinite(constant):
            raise ParamError("constant", f"normalizing constant must be finite >= 0, got {constant}")
        b = params.q / gamma
        pg = exps.base / gamma
        if regime.is_critical:
            c = b  # exact, so is_critical round-trips bit-for-bit
        else:
            c = exps.gamma_crit / gamma
        return cls.make(b=b, c=c, kappa=al * constant, pgamma=pg)

    @property
    def is_critical(self) -> bool:
        return self.c == self.b


# -- raw evaluations ---------------------------------------------------

def _shape(x, out):
    return float(out) if out.ndim == 0 else out


def value_f(cp: CurveParams, t):
    """Objective curve f(t) on (0, inf)."""
    t = np.asarray(t, dtype=float)
    L = np.log1p(t)
    first = np.exp(-cp.pgamma * L)
    second = cp.kappa * np.exp(cp.c * np.log(t) - cp.b * L) if cp.kappa else 0.0
    return _shape(t, first + second)


def value_g(cp: CurveParams, t):
    """Ratio curve g(t) on (0, inf) (independent of kappa)."""
    t = np.asarray(t, dtype=float)
    L = np.log1p(t)
    return _shape(t, np.exp(cp.a * L - cp.c * np.log(t)) * np.expm1(cp.pgamma * L))


def value_k(cp: CurveParams, s):
    """Compactified objective k(s) = f(t(s)) on (0, 1), evaluated directly in s."""
    s = np.asarray(s, dtype=float)
    lu = np.log1p(-s)  # log(1-s), stable
    first = np.exp(cp.pgamma * lu)
    second = cp.kappa * np.exp(cp.c * np.log(s) + (cp.b - cp.c) * lu) if cp.kappa else 0.0
    return _shape(s, first + second)


def value_l(cp: CurveParams, s):
    """Compactified ratio l(s) = g(t(s)) on (0, 1), evaluated directly in s."""
    s = np.asarray(s, dtype=float)
    lu = np.log1p(-s)
    return _shape(s, np.exp(-cp.c * np.log(s) + (cp.c - cp.b) * lu) * (-np.expm1(cp.pgamma * lu)))


def h_factor(cp: CurveParams, t):
    """Elementary factor with the sign of f'(t).

    h(t) = -pgamma (1+t)^a + kappa c t^(c-1) + kappa (c-b) t^c ;
    the last term vanishes identically in the critical case c = b.
    kappa = 0 gives h < 0 everywhere (f strictly decreasing).
    """
    t = np.asarray(t, dtype=float)
    out = -cp.pgamma * np.exp(cp.a * np.log1p(t))
    if cp.kappa:
        lt = np.log(t)
        out = out + cp.kappa * cp.c * np.exp((cp.c - 1.0) * lt)
        if cp.c != cp.b:
            out = out + cp.kappa * (cp.c - cp.b) * np.exp(cp.c * lt)
    return _shape(t, out)


def m_factor(cp: CurveParams, s):
    """Elementary factor with the sign of l'(s), s in (0, 1).

    With u = 1-s and r = pgamma/c:

        m(s) = (1-r) u^pgamma + r u^(pgamma-1) - 1
               - ((c-b)/c) * (s/u) * (1 - u^pgamma).

    The correction line vanishes in the critical case c = b, where the
    formula collapses to the classical two-power expression; away from
    c = b it is exactly what multiplying l'/l by s*u*(1-u^pgamma)/(c*u)
    produces, so the sign identity holds across the whole family.
    """
    s = np.asarray(s, dtype=float)
    u = 1.0 - s
    lu = np.log1p(-s)
    r = cp.pgamma / cp.c
    out = (1.0 - r) * np.exp(cp.pgamma * lu) + r * np.exp((cp.pgamma - 1.0) * lu) - 1.0
    if cp.c != cp.b:
        out = out - ((cp.c - cp.b) / cp.c) * (s / u) * (-np.expm1(cp.pgamma * lu))
    return _shape(s, out)


def stationary_points(cp: CurveParams, n: int = 8192) -> list[float]:
    """All interior stationary points of f, by log-domain root-finding.

    The zero set of h rearranges to G(lt) = 0 with lt = log t and

        G(lt) = log kappa + (c-1) lt + log(c + (c-b) e^lt)
                - log pgamma - a log(1 + e^lt),

    valid wherever c + (c-b) e^lt > 0 (elsewhere h < 0 outright, so no
    roots are lost).  Every quantity stays representable for lt spanning
    hundreds of e-folds, which matters: for weights near zero the maximum
    of f sits at t values far beyond floating-point grid resolution, and
    this is the only way to locate it.  Returns the roots as t values in
    increasing order; empty when f is monotone (e.g. kappa = 0).
    """
    if cp.kappa == 0.0:
        return []
    lo, hi = -690.0, 690.0
    if not cp.is_critical:
        # keep c + (c-b) e^lt positive: lt < log(c / (b-c))
        hi = min(hi, math.log(cp.c / (cp.b - cp.c)) - 1e-12)
        if hi <= lo:
            return []
    lt = np.linspace(lo, hi, n)

    def G(x):
        x = np.asarray(x, dtype=float)
        mid = (math.log(cp.c) if cp.is_critical
               else np.log(cp.c + (cp.c - cp.b) * np.exp(x)))
        return (math.log(cp.kappa) + (cp.c - 1.0) * x + mid
                - math.log(cp.pgamma) - cp.a * np.logaddexp(0.0, x))

    vals = G(lt)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("stationarity function evaluated non-finite")
    roots: list[float] = []
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    for i in sign_change:
        a_, b_ = float(lt[i]), float(lt[i + 1])
        fa = float(vals[i])
        for _ in range(200):
            m = 0.5 * (a_ + b_)
            fm = float(G(m))
            if fm == 0.0:
                a_ = b_ = m
                break
            if (fa > 0) == (fm > 0):
                a_, fa = m, fm
            else:
                b_ = m
            if b_ - a_ <= 1e-14 * max(1.0, abs(a_)):
                break
        roots.append(math.exp(0.5 * (a_ + b_)))
    # exact zeros at grid nodes (rare) count too
    roots.extend(math.exp(float(x)) for x in lt[vals == 0.0])
    return sorted(roots)


# -- analytic boundary limits ------------------------------------------

def f_limits(cp: CurveParams) -> tuple[float, float]:
    """(lim_{t->0} f, lim_{t->inf} f); both always finite."""
    return 1.0, (cp.kappa if cp.is_critical else 0.0)


def g_limits(cp: CurveParams) -> tuple[float, float]:
    """(lim_{t->0} g, lim_{t->inf} g); entries may be math.inf.

    Near zero g ~ pgamma * t^(1-c), so the limit is 0 / pgamma / inf as
    c < 1 / c = 1 / c > 1.  Near infinity g ~ t^(b-c), giving 1 in the
    critical case and +inf otherwise.
    """
    if cp.c < 1.0:
        at0 = 0.0
    elif cp.c == 1.0:
        at0 = cp.pgamma
    else:
        at0 = math.inf
    atinf = 1.0 if cp.is_critical else math.inf
    return at0, atinf


# -- curve objects for the optimizer ------------------------------------

Kind = Literal["objective", "ratio"]


@dataclass(frozen=True)
class ScalarCurve:
    """One curve (objective f or ratio g) bundled with its boundary limits.

    The half-line optimizer consumes these; evaluation for optimization
    happens in the compactified variable s.
    """

    params: CurveParams
    kind: Kind

    def __post_init__(self):
        if self.kind not in ("objective", "ratio"):
            raise ValueError(f"kind must be 'objective' or 'ratio', got {self.kind!r}")

    def value_t(self, t):
        return (value_f if self.kind == "objective" else value_g)(self.params, t)

    def value_s(self, s):
        return (value_k if self.kind == "objective" else value_l)(self.params, s)

    def value_s_logs(self, s, log_s, log_u):
        """Fast path: evaluate at s given precomputed log(s) and log(1-s)."""
        cp = self.params
        if self.kind == "objective":
            out = np.exp(cp.pgamma * log_u)
            if cp.kappa:
                out = out + cp.kappa * np.exp(cp.c * log_s + (cp.b - cp.c) * log_u)
            return out
        return np.exp(-cp.c * log_s + (cp.c - cp.b) * log_u) * (-np.expm1(cp.pgamma * log_u))

    def limits(self) -> tuple[float, float]:
        return (f_limits if self.kind == "objective" else g_limits)(self.params)


def objective_curve(cp: CurveParams) -> ScalarCurve:
    return ScalarCurve(cp, "objective")


def ratio_curve(cp: CurveParams) -> ScalarCurve:
    return ScalarCurve(cp, "ratio")


def sample_rows(cp: CurveParams, t_grid) -> list[dict]:
    """Tabulate (t, s, f, g, h_factor, m_factor) along a grid of t values."""
    t = np.asarray(t_grid, dtype=float)
    s = t / (1.0 + t)
    f = np.atleast_1d(value_f(cp, t))
    g = np.atleast_1d(value_g(cp, t))
    h = np.atleast_1d(h_factor(cp, t))
    m = np.atleast_1d(m_factor(cp, s))
    return [
        {"t": float(t[i]), "s": float(s[i]), "f": float(f[i]), "g": float(g[i]),
         "h_factor": float(h[i]), "m_factor": float(m[i])}
        for i in range(t.size)
    ]

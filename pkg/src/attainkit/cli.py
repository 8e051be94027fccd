"""Command-line surface: classify, constants, curve, maximizer, sweep, verify.

JSON goes to stdout by default; ``--csv`` switches the tabular commands to
RFC-4180-style CSV with LF line endings.  Identical invocations produce
byte-identical output: keys are emitted in fixed order and floats are
formatted with 17 significant digits.  Exit codes: 0 success, 1 invalid
parameters or usage, 2 numerical failure, 3 failed verification.

``--q critical`` is the exact way to request the critical exponent; a
numeric ``--q`` that matches it to within 1e-12 relative is accepted with
a warning.  The environment variable ATTAIN_KIT_THREADS caps the thread
pools of the underlying numeric libraries.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys


def apply_thread_cap() -> None:
    """Honor ATTAIN_KIT_THREADS by capping the numeric libraries' pools.

    Effective when it runs before the numeric libraries initialize, which
    the package __init__ guarantees for every entry point.
    """
    cap = os.environ.get("ATTAIN_KIT_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, cap)


apply_thread_cap()

import numpy as np

from .classify import (ConstantSet, classify, kappa_multiplier,
                       resolve_constants)
from .constants import (fractional_constant, gns_constant_estimate,
                        sobolev_constant)
from .curves import CurveParams, sample_rows
from .errors import (DivergentNormError, NormalizationError, NumericalError,
                     ParamError)
from .params import ProblemParams
from .profiles import (build_u_star, build_w_lambda, evaluate_J,
                       lambda_from_tstar, norms)
from .verify import run_all

SCHEMA = "attain-kit/1"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY_FAILED = 3


# -- deterministic JSON ----------------------------------------------------

def _json_scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_json(obj, indent: int = 0) -> str:
    """Render nested dict/list/scalar data with stable key order and
    fixed 17-significant-digit float formatting."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f'{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}'
                 for k, v in obj.items())
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = (f"{inner}{to_json(v, indent + 1)}" for v in seq)
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return _json_scalar(obj)


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    def cell(v) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, (float, np.floating)):
            return format(float(v), ".17g")
        text = str(v)
        if any(ch in text for ch in ',"\n'):
            text = '"' + text.replace('"', '""') + '"'
        return text

    lines = [",".join(header)]
    lines += [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


# -- parameter assembly ----------------------------------------------------

def _weight(ns) -> float:
    alpha, beta = getattr(ns, "alpha", None), getattr(ns, "beta", None)
    if alpha is not None and beta is not None and alpha != beta:
        raise ParamError("alpha", "--alpha and --beta are synonyms; "
                                  f"got conflicting values {alpha} and {beta}")
    value = alpha if alpha is not None else beta
    if value is None:
        raise ParamError("alpha", "a weight is required (--alpha, or --beta "
                                  "for the fractional family)")
    return value


def _build_params(ns) -> ProblemParams:
    if ns.N is None:
        raise ParamError("N", "--N is required")
    if ns.gamma is None:
        raise ParamError("gamma", "--gamma is required")
    weight = _weight(ns)
    q_critical = ns.q == "critical"
    if ns.s is not None:
        if q_critical:
            return ProblemParams.fractional_critical(N=ns.N, s=ns.s,
                                                     gamma=ns.gamma, alpha=weight)
        if ns.q is None:
            raise ParamError("q", "--q (numeric or 'critical') is required")
        return ProblemParams.fractional(N=ns.N, s=ns.s, q=float(ns.q),
                                        gamma=ns.gamma, alpha=weight)
    if ns.p is None:
        raise ParamError("p", "--p is required for the local family")
    if q_critical:
        return ProblemParams.local_critical(N=ns.N, p=ns.p, gamma=ns.gamma,
                                            alpha=weight)
    if ns.q is None:
        raise ParamError("q", "--q (numeric or 'critical') is required")
    return ProblemParams.local(N=ns.N, p=ns.p, q=float(ns.q),
                               gamma=ns.gamma, alpha=weight)


def _constants_for(ns, params: ProblemParams) -> ConstantSet:
    given = ConstantSet()
    if getattr(ns, "frac_constant", None) is not None:
        given = ConstantSet(fractional=fractional_constant(ns.frac_constant))
    return resolve_constants(
        params, given,
        quadrature_resolution=getattr(ns, "resolution", None) or 64,
        ascent_budget=getattr(ns, "budget", None) or 1200,
        ascent_grid_n=getattr(ns, "grid", None) or 200)


def _problem_dict(params: ProblemParams) -> dict:
    return {
        "N": params.N,
        "p": params.p,
        "q": params.q,
        "q_critical": params.q_critical,
        "gamma": params.gamma,
        "alpha": params.alpha,
        "s": params.s,
        "regime": params.regime().value,
    }


def _constant_dict(c) -> dict:
    meta = {k: v for k, v in c.meta.items()
            if isinstance(v, (bool, int, float, str, np.integer, np.floating))
            or (isinstance(v, (list, tuple)) and len(v) <= 16
                and all(isinstance(x, (int, float)) for x in v))}
    return {"value": c.value, "method": c.method,
            "err_bound": c.err_bound, "meta": meta}


def _verdict_dict(v) -> dict:
    return {
        "attained": v.attained,
        "reason": v.reason.value,
        "D": v.D,
        "threshold": v.threshold,
        "t_star": v.t_star,
        "closed_form_D": v.closed_form_D,
        "regime": v.regime.value,
    }


# -- subcommands -----------------------------------------------------------

def _cmd_classify(ns) -> int:
    params = _build_params(ns)
    cset = _constants_for(ns, params)
    v = classify(params, constants=cset)
    doc = {"schema": SCHEMA, "command": "classify",
           "problem": _problem_dict(params), "verdict": _verdict_dict(v)}
    _emit(to_json(doc), ns.out)
    return EXIT_OK


def _cmd_constants(ns) -> int:
    if ns.N is None:
        raise ParamError("N", "--N is required")
    doc: dict = {"schema": SCHEMA, "command": "constants", "N": ns.N}
    if ns.s is not None:
        if ns.frac_constant is None:
            raise ParamError("frac-constant",
                             "the fractional constant is user input; pass --frac-constant")
        doc["s"] = ns.s
        doc["fractional"] = _constant_dict(fractional_constant(ns.frac_constant))
    elif ns.q is not None and ns.q != "critical":
        if ns.p is None:
            raise ParamError("p", "--p is required")
        doc["p"] = ns.p
        doc["q"] = float(ns.q)
        doc["interpolation"] = _constant_dict(gns_constant_estimate(
            ns.N, ns.p, float(ns.q), budget=ns.budget or 4000,
            grid_n=ns.grid or 800))
    else:
        if ns.p is None:
            raise ParamError("p", "--p is required")
        doc["p"] = ns.p
        doc["sobolev"] = _constant_dict(sobolev_constant(
            ns.N, ns.p, resolution=ns.resolution or 64))
    _emit(to_json(doc), ns.out)
    return EXIT_OK


def _cmd_curve(ns) -> int:
    params = _build_params(ns)
    cset = _constants_for(ns, params)
    cp = CurveParams.from_problem(params, kappa_multiplier(params, cset))
    n = ns.grid or 512
    t = np.geomspace(1e-4, 1e4, n)
    rows = sample_rows(cp, t)
    if ns.csv:
        header = ["t", "s", "f", "g", "h_factor", "m_factor"]
        _emit(_csv_text(header, [[row[k] for k in header] for row in rows]), ns.out)
        return EXIT_OK
    doc = {"schema": SCHEMA, "command": "curve",
           "problem": _problem_dict(params),
           "curve_params": {"a": cp.a, "b": cp.b, "c": cp.c,
                            "kappa": cp.kappa, "pgamma": cp.pgamma},
           "rows": rows}
    _emit(to_json(doc), ns.out)
    return EXIT_OK


def _cmd_maximizer(ns) -> int:
    params = _build_params(ns)
    cset = _constants_for(ns, params)
    v = classify(params, constants=cset)
    if not v.attained:
        doc = {"schema": SCHEMA, "command": "maximizer",
               "problem": _problem_dict(params), "verdict": _verdict_dict(v),
               "maximizer": None,
               "note": "no maximizer exists for these parameters"}
        _emit(to_json(doc), ns.out)
        return EXIT_OK
    if params.is_fractional or not params.regime().is_critical:
        raise ParamError(
            "params",
            "explicit maximizer profiles are available for the critical "
            "local family only; other regimes have no closed-form extremal")
    N, p, gamma = params.N, params.p, params.gamma
    star = build_u_star(N, p)
    u_norms = norms(star, p, params.q, gamma)
    lam = lambda_from_tstar(v.t_star, u_norms, gamma, N)
    prof = build_w_lambda(N, p, lam, gamma, u_norms=u_norms)
    j_check = evaluate_J(prof, params)
    tol = ns.tol or 1e-6
    if abs(j_check - v.D) > tol * max(1.0, abs(v.D)):
        raise NumericalError(
            f"constructed maximizer evaluates to {j_check!r} but the "
            f"supremum is {v.D!r} (relative tolerance {tol})")
    header = {"schema": SCHEMA, "command": "maximizer",
              "problem": _problem_dict(params),
              "lambda": lam, "t_star": v.t_star, "D": v.D, "J_check": j_check}
    if ns.csv:
        if ns.out:
            _emit(to_json(header), None)
        else:
            sys.stderr.write(to_json(header) + "\n")
        rows = [[float(r), float(u)] for r, u in zip(prof.grid, prof.values)]
        _emit(_csv_text(["r", "u"], rows), ns.out)
        return EXIT_OK
    header["profile"] = {"r": [float(x) for x in prof.grid],
                         "u": [float(x) for x in prof.values]}
    _emit(to_json(header), ns.out)
    return EXIT_OK


def _parse_gamma_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParamError("gamma-range",
                         f"--gamma-range wants start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError as exc:
        raise ParamError("gamma-range", f"non-numeric gamma range {text!r}") from exc
    if step <= 0 or stop < start:
        raise ParamError("gamma-range",
                         f"need start <= stop and step > 0, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _cmd_sweep(ns) -> int:
    if ns.gamma_range is None:
        raise ParamError("gamma-range", "--gamma-range start:stop:step is required")
    gammas = _parse_gamma_range(ns.gamma_range)
    ns.gamma = float(gammas[0])
    params = _build_params(ns)
    cset = _constants_for(ns, params)
    rows = []
    for g in gammas:
        v = classify(dataclasses.replace(params, gamma=float(g)), constants=cset)
        rows.append({"gamma": float(g), "threshold": v.threshold,
                     "D": v.D, "attained": v.attained})
    if ns.csv:
        header = ["gamma", "threshold", "D", "attained"]
        _emit(_csv_text(header, [[row[k] for k in header] for row in rows]), ns.out)
        return EXIT_OK
    doc = {"schema": SCHEMA, "command": "sweep",
           "problem": _problem_dict(params), "rows": rows}
    _emit(to_json(doc), ns.out)
    return EXIT_OK


def _cmd_verify(ns) -> int:
    reports = run_all()
    doc = {"schema": SCHEMA, "command": "verify",
           "reports": [{"name": r.name, "passed": r.passed,
                        "worst_violation": r.worst_violation,
                        "n_cases": r.n_cases, "tolerance": r.tolerance,
                        "details": list(r.details)} for r in reports]}
    _emit(to_json(doc), ns.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse with usage errors exiting 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_VALIDATION)


def _add_problem_flags(sub, with_gamma=True):
    sub.add_argument("--N", type=int, help="ambient dimension")
    sub.add_argument("--p", type=float, help="base integrability exponent (local family)")
    sub.add_argument("--q", help="secondary exponent: a number, or 'critical'")
    sub.add_argument("--s", type=float, help="fractional smoothing order (selects the fractional family)")
    if with_gamma:
        sub.add_argument("--gamma", type=float, help="constraint coupling exponent")
    sub.add_argument("--alpha", type=float, help="weight of the q-term")
    sub.add_argument("--beta", type=float, help="synonym for --alpha (fractional naming)")
    sub.add_argument("--frac-constant", type=float, dest="frac_constant",
                     help="user-supplied sharp constant for the fractional family")


def _add_numeric_flags(sub, tol=False):
    if tol:
        sub.add_argument("--tol", type=float, help="verification tolerance")
    sub.add_argument("--resolution", type=int, help="quadrature resolution")
    sub.add_argument("--budget", type=int, help="ascent sweep budget")
    sub.add_argument("--grid", type=int, help="grid size (ascent nodes / curve samples)")


def _add_output_flags(sub, csv=True):
    sub.add_argument("--json", action="store_true", help="JSON output (the default)")
    if csv:
        sub.add_argument("--csv", action="store_true", help="CSV output")
    sub.add_argument("--out", help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="attain-kit",
                     description="Attainability toolkit for a family of "
                                 "Sobolev-type maximization problems.")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sub = subs.add_parser("classify", parents=[], help="full attainability verdict")
    _add_problem_flags(sub)
    _add_numeric_flags(sub)
    _add_output_flags(sub, csv=False)
    sub.set_defaults(handler=_cmd_classify)

    sub = subs.add_parser("constants", help="sharp constants")
    _add_problem_flags(sub, with_gamma=False)
    sub.set_defaults(gamma=None, alpha=None, beta=None)
    _add_numeric_flags(sub)
    _add_output_flags(sub, csv=False)
    sub.set_defaults(handler=_cmd_constants)

    sub = subs.add_parser("curve", help="sample the scalar curves")
    _add_problem_flags(sub)
    _add_numeric_flags(sub)
    _add_output_flags(sub)
    sub.set_defaults(handler=_cmd_curve)

    sub = subs.add_parser("maximizer", help="construct and check an explicit maximizer")
    _add_problem_flags(sub)
    _add_numeric_flags(sub, tol=True)
    _add_output_flags(sub)
    sub.set_defaults(handler=_cmd_maximizer)

    sub = subs.add_parser("sweep", help="threshold and verdict along a gamma range")
    _add_problem_flags(sub, with_gamma=False)
    sub.add_argument("--gamma-range", dest="gamma_range",
                     help="start:stop:step, e.g. 0.5:4:0.01")
    _add_numeric_flags(sub)
    _add_output_flags(sub)
    sub.set_defaults(handler=_cmd_sweep)

    sub = subs.add_parser("verify", help="run the verification suite")
    _add_output_flags(sub, csv=False)
    sub.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    apply_thread_cap()
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.handler(ns)
    except ParamError as exc:
        sys.stderr.write(f"validation error ({exc.code}): {exc}\n")
        return EXIT_VALIDATION
    except (NumericalError, DivergentNormError, NormalizationError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())

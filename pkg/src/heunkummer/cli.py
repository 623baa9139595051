"""Command line front end.

Every subcommand prints one record to stdout: JSON by default, CSV with
--format csv. A record carries the resolved inputs next to the results and
diagnostics, so a saved record can be re-run byte-identically:

    heunkummer eval-1f1 --a 1 --c 2 --x 0.5
    heunkummer che-series --family a2 --gamma 1 --delta 0 --eps 1 --alpha 1 --q 1 --z 0.3
    heunkummer q-spectrum --family a2 --gamma 2.3 --delta=-2 --eps 1.1 --alpha 0.7
    heunkummer two-state --u0 2 --delta0 0.5 --delta1 1 --format csv
    heunkummer --replay saved_record.json

Complex values are written RE or RE+IMi (e.g. 1.5, 2+0.5i, -0.25i). Values
starting with a minus sign must use the --opt=value form. A config file in
flat "key = value" lines supplies defaults for any option; explicit flags
win. HEUN_LOG_LEVEL (error|warn|info|debug) controls stderr logging.

Exit codes: 0 on success, 1 on a domain error (a structured error record is
still printed), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import os
import random
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from .che_core import (CheParams, frobenius_coefficients, frobenius_eval,
                       residual, transform_1_minus_z)
from .errors import ConditionNotMetError, HeunKummerError, SingularPointError
from .expansions import Family, build_series, eval_series_with_derivatives
from .kummer import (DEFAULT_MAX_TERMS, DEFAULT_TOL, IDENTITY_IDS, eval_1f1,
                     identity_residual)
from .termination import (KIND_ALPHA_OVER_EPS, KIND_DELTA_INT,
                          KIND_GAMMA_DELTA_ALPHA, TerminationCondition,
                          _admissible_kinds, detect_termination,
                          enumerate_termination_conditions, q_spectrum,
                          verify_termination)
from .twostate import (DELTA0_CLAMP, LorentzianModel, closed_form_solution,
                       equation_residual_in_t, integrate_rk,
                       locate_return_delta0, match_against_rk, reduce_to_che,
                       return_spectrum_relation)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

LOG = logging.getLogger("heunkummer.cli")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}

REQUIRED = object()  # sentinel default for mandatory options


# ---------------------------------------------------------------------------
# value parsing and formatting

def parse_complex(text: str) -> complex:
    """Accept RE, IMi, or RE+IMi literals, e.g. '2', '-0.5i', '1+0.4i'."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    return complex(cleaned)


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag > 0 else "-"
    return f"{repr(z.real)}{sign}{repr(abs(z.imag))}i"


def _fmt_float(x: float) -> str:
    # 17 significant digits round-trip any double exactly
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0:
        return "0"  # fold negative zero
    return format(float(x), ".17g")


def _coerce(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.complexfloating):
        return complex(v)
    return v


def _scalar_json(v) -> str:
    v = _coerce(v)
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, complex):
        return '{"re": %s, "im": %s}' % (_fmt_float(v.real), _fmt_float(v.imag))
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _write_json(v, buf: list, indent: int) -> None:
    v = _coerce(v)
    pad = "  " * indent
    if isinstance(v, dict):
        if not v:
            buf.append("{}")
            return
        buf.append("{\n")
        for i, (k, item) in enumerate(v.items()):
            buf.append("  " * (indent + 1) + json.dumps(str(k)) + ": ")
            _write_json(item, buf, indent + 1)
            buf.append(",\n" if i < len(v) - 1 else "\n")
        buf.append(pad + "}")
    elif isinstance(v, (list, tuple, np.ndarray)):
        items = list(v)
        if not items:
            buf.append("[]")
            return
        buf.append("[\n")
        for i, item in enumerate(items):
            buf.append("  " * (indent + 1))
            _write_json(item, buf, indent + 1)
            buf.append(",\n" if i < len(items) - 1 else "\n")
        buf.append(pad + "]")
    else:
        buf.append(_scalar_json(v))


def render_json(record: dict) -> str:
    buf: list[str] = []
    _write_json(record, buf, 0)
    buf.append("\n")
    return "".join(buf)


def _csv_cell(v) -> str:
    v = _coerce(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, complex):
        return format_complex(v)
    return str(v)


def _flatten(v, prefix: str = ""):
    v = _coerce(v)
    if isinstance(v, dict):
        for k, item in v.items():
            yield from _flatten(item, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(v, (list, tuple, np.ndarray)):
        for i, item in enumerate(v):
            yield from _flatten(item, f"{prefix}.{i}")
    else:
        yield prefix, v


def render_csv(record: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    table = record.get("results", {}).get("table")
    if table:
        writer.writerow(table["columns"])
        for row in table["rows"]:
            writer.writerow([_csv_cell(cell) for cell in row])
    else:
        writer.writerow(["key", "value"])
        for path, value in _flatten(record):
            writer.writerow([path, _csv_cell(value)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# option declarations

class Opt(NamedTuple):
    name: str       # long option name, kebab case
    conv: object    # "complex" | "float" | "int" | "str" | "flag" | choices tuple
    default: object
    help: str


COMMON_OPTS = (
    Opt("format", ("json", "csv"), "json", "output format"),
    Opt("jobs", "int", 1, "worker threads for sweep commands"),
    Opt("config", "str", None, "flat key = value file with option defaults"),
)

_CHE_OPTS = (
    Opt("gamma", "complex", REQUIRED, "exponent parameter at z = 0"),
    Opt("delta", "complex", REQUIRED, "exponent parameter at z = 1"),
    Opt("eps", "complex", REQUIRED, "coefficient of u' (irregular point scale)"),
    Opt("alpha", "complex", REQUIRED, "coefficient of z u"),
    Opt("q", "complex", 0j, "accessory parameter"),
)

_FAMILY_CHOICES = ("a1", "a2", "b3", "b4", "c")
_ALPHA0_CHOICES = ("alpha-over-eps", "gamma")
_KIND_CHOICES = (KIND_ALPHA_OVER_EPS, KIND_DELTA_INT, KIND_GAMMA_DELTA_ALPHA)


class CommandSpec(NamedTuple):
    summary: str
    opts: tuple
    runner: object


def _params_from(ns) -> CheParams:
    return CheParams(ns.gamma, ns.delta, ns.eps, ns.alpha, ns.q)


# ---------------------------------------------------------------------------
# runners; each returns (results, diagnostics)

def run_eval_1f1(ns):
    value = eval_1f1(ns.a, ns.c, ns.x, ns.tol, ns.max_terms)
    # recheck against a tighter, longer sum of the same series
    recheck = eval_1f1(ns.a, ns.c, ns.x, ns.tol / 100, ns.max_terms * 2)
    LOG.info("eval-1f1 value %s recheck delta %.3e", value, abs(value - recheck))
    results = {"value": value}
    diagnostics = {"recheck_delta": abs(value - recheck),
                   "tol": ns.tol, "max_terms": ns.max_terms}
    return results, diagnostics


def _near_nonpositive_int(z: complex, tol: float = 1e-3) -> bool:
    r = round(z.real)
    return r <= 0 and abs(z - r) < tol


def _draw_identity_point(rng: random.Random, radius: float):
    a = complex(rng.uniform(0.5, 3.0), rng.uniform(-0.5, 0.5))
    while True:
        c = complex(rng.uniform(0.5, 3.0), rng.uniform(-0.5, 0.5))
        # identities shift the lower parameter down by one; keep it off poles
        if not _near_nonpositive_int(c - 1):
            break
    r = radius * math.sqrt(rng.random())
    theta = rng.uniform(0.0, 2.0 * math.pi)
    x = complex(r * math.cos(theta), r * math.sin(theta))
    return a, c, x


def run_verify_identities(ns):
    ids = IDENTITY_IDS if ns.identity == "all" else (ns.identity,)
    point_args = (ns.a, ns.c, ns.x)
    if any(v is not None for v in point_args):
        if any(v is None for v in point_args):
            raise ValueError("point mode needs all of --a, --c, --x")
        residuals = {i: identity_residual(i, ns.a, ns.c, ns.x) for i in ids}
        results = {"residuals": residuals,
                   "max_residual": max(residuals.values())}
        return results, {"mode": "point"}

    rng = random.Random(ns.seed)
    draws = [_draw_identity_point(rng, ns.radius) for _ in range(ns.draws)]

    def worst(identity_id: str):
        top = -1.0
        argmax = draws[0]
        for a, c, x in draws:
            res = identity_residual(identity_id, a, c, x)
            if res > top:
                top, argmax = res, (a, c, x)
        return top, argmax

    if ns.jobs > 1:
        with ThreadPoolExecutor(max_workers=ns.jobs) as ex:
            sweep = list(ex.map(worst, ids))
    else:
        sweep = [worst(i) for i in ids]
    residuals = {i: sweep[k][0] for k, i in enumerate(ids)}
    overall = max(residuals.values())
    k_worst = max(range(len(ids)), key=lambda k: sweep[k][0])
    wa, wc, wx = sweep[k_worst][1]
    LOG.info("identity sweep: %d draws, max residual %.3e", ns.draws, overall)
    results = {"residuals": residuals, "max_residual": overall}
    diagnostics = {"mode": "sweep", "draws": ns.draws, "seed": ns.seed,
                   "radius": ns.radius,
                   "worst_case": {"identity": ids[k_worst],
                                  "a": wa, "c": wc, "x": wx}}
    return results, diagnostics


def run_che_series(ns):
    params = _params_from(ns)
    family = Family.from_string(ns.family)
    sol = build_series(params, family, ns.n_terms,
                       alpha0_choice=ns.alpha0_choice, s0=ns.s0)
    # truncate to the exact finite sum when the built tail already vanished
    try:
        cond = detect_termination(params, family, ns.alpha0_choice)
    except ValueError:
        cond = None
    if (cond is not None and cond.N + 2 < len(sol.coefficients)
            and verify_termination(sol, cond.N)):
        sol = dataclasses.replace(sol,
                                  coefficients=sol.coefficients[:cond.N + 1],
                                  terminated=True, terminal_index=cond.N)
        LOG.info("series terminates at n = %d (%s)", cond.N, cond.kind)
    u, u1, u2, tail = eval_series_with_derivatives(sol, ns.z)
    try:
        r = residual(params, u, u1, u2, ns.z)
        ode_residual = abs(r) / max(1.0, abs(u), abs(u1), abs(u2))
    except SingularPointError:
        ode_residual = None  # value is still meaningful at z = 0 or 1
    results = {"value": u, "derivative": u1, "second_derivative": u2,
               "terminated": sol.terminated,
               "terminal_index": sol.terminal_index,
               "alpha0": sol.alpha0, "gamma0": sol.gamma0, "s0": sol.s0}
    diagnostics = {"tail_estimate": tail, "ode_residual": ode_residual,
                   "n_coefficients": len(sol.coefficients)}
    return results, diagnostics


def run_frobenius(ns):
    params = _params_from(ns)
    series = frobenius_coefficients(params, ns.k_terms)
    u, u1, u2 = frobenius_eval(series, ns.z)
    try:
        r = residual(params, u, u1, u2, ns.z)
        ode_residual = abs(r) / max(1.0, abs(u), abs(u1), abs(u2))
    except SingularPointError:
        ode_residual = None
    results = {"u": u, "du": u1, "d2u": u2}
    diagnostics = {"ode_residual": ode_residual, "k_terms": ns.k_terms,
                   "last_coefficient": series.coefficients[-1]}
    return results, diagnostics


def run_transform(ns):
    params = _params_from(ns)
    tp = transform_1_minus_z(params)
    back = transform_1_minus_z(tp)
    results = {"gamma": tp.gamma, "delta": tp.delta, "eps": tp.epsilon,
               "alpha": tp.alpha, "q": tp.q}
    diagnostics = {"involution_exact": back == params}
    return results, diagnostics


def run_detect_termination(ns):
    params = _params_from(ns)
    family = Family.from_string(ns.family)
    if ns.all:
        conditions = enumerate_termination_conditions(params, family,
                                                      ns.alpha0_choice)
    else:
        found = detect_termination(params, family, ns.alpha0_choice)
        conditions = [found] if found is not None else []
    results = {"found": bool(conditions),
               "conditions": [{"kind": c.kind, "N": c.N} for c in conditions]}
    diagnostics = {"admissible_kinds": list(_admissible_kinds(family,
                                                              ns.alpha0_choice))}
    return results, diagnostics


def run_q_spectrum(ns):
    params = _params_from(ns)
    family = Family.from_string(ns.family)
    if (ns.kind is None) != (ns.n is None):
        raise ValueError("--kind and --n must be given together")
    if ns.kind is not None:
        condition = TerminationCondition(family=family, kind=ns.kind, N=ns.n)
    else:
        condition = detect_termination(params, family, ns.alpha0_choice)
        if condition is None:
            raise ConditionNotMetError(
                "no integer coincidence detected for these parameters; "
                "pass --kind and --n to force a condition")
    spectrum = q_spectrum(params, family, condition, ns.alpha0_choice)
    rows = [[r.real, r.imag, v, res]
            for r, v, res in zip(spectrum.roots, spectrum.verified,
                                 spectrum.root_residuals)]
    LOG.info("spectrum %s N=%d: %d roots, all verified: %s",
             condition.kind, condition.N, len(spectrum.roots),
             all(spectrum.verified))
    results = {"kind": condition.kind, "N": condition.N,
               "roots": list(spectrum.roots),
               "verified": list(spectrum.verified),
               "polynomial": list(spectrum.polynomial),
               "table": {"columns": ["root_re", "root_im", "verified",
                                     "rebuild_residual"],
                         "rows": rows}}
    diagnostics = {"degree": condition.N + 1,
                   "all_verified": all(spectrum.verified),
                   "root_residuals": list(spectrum.root_residuals)}
    return results, diagnostics


def run_two_state(ns):
    model = LorentzianModel(ns.u0, ns.delta0, ns.delta1)
    family = Family.from_string(ns.family)
    red = reduce_to_che(model)
    cf = closed_form_solution(model, family, ns.n_terms)
    che = red.che
    results = {"R": red.R,
               "che": {"gamma": che.gamma, "delta": che.delta,
                       "eps": che.epsilon, "alpha": che.alpha, "q": che.q},
               "exponents": {"alpha1": red.exp_alpha1,
                             "alpha2": red.exp_alpha2},
               "terminated": cf.sol.terminated}
    diagnostics = {"steps": ns.steps, "z_map": red.z_map}
    if cf.sol.terminated:
        # a genuine finite sum: compare it against the RK basis
        match = match_against_rk(model, family, ns.n_terms, ns.t_start,
                                 ns.t_end, ns.steps, ns.samples)
        check_ts = np.linspace(ns.t_start, ns.t_end, 21)
        eq_residual = max(equation_residual_in_t(model, cf, float(t))
                          for t in check_ts)
        rows = [[float(t), float(p1), float(p2), float(abs(cl - co))]
                for t, p1, p2, cl, co in zip(match.sample_times, match.p1,
                                             match.p2, match.closed,
                                             match.combined)]
        results["max_deviation"] = match.max_deviation
        results["lam"] = match.lam
        results["mu"] = match.mu
        diagnostics["norm_drift"] = match.norm_drift
        diagnostics["equation_residual_max"] = eq_residual
        diagnostics["anchor"] = match.anchor
    else:
        # off the termination manifold there is no finite closed form;
        # report the trajectory alone rather than a meaningless comparison
        LOG.info("series does not terminate; closed-form comparison skipped")
        traj = integrate_rk(model, ns.t_start, ns.t_end, ns.steps,
                            init=(1 + 0j, 0j))
        idx = np.linspace(0, len(traj.times) - 1,
                          ns.samples).round().astype(int)
        rows = [[float(traj.times[i]), float(abs(traj.a1[i]) ** 2),
                 float(abs(traj.a2[i]) ** 2), None] for i in idx]
        results["max_deviation"] = None
        diagnostics["norm_drift"] = traj.norm_drift()
        diagnostics["closed_form"] = ("series does not terminate at these "
                                      "parameters; deviation not computed")
    results["table"] = {"columns": ["t", "p1", "p2", "closed_rk_deviation"],
                        "rows": rows}
    return results, diagnostics


def run_return_spectrum_scan(ns):
    probe = reduce_to_che(LorentzianModel(ns.u0, 1.0, ns.delta1))
    if abs(probe.R - (ns.n + 1)) > 1e-9:
        raise ConditionNotMetError(
            f"R = {probe.R} but a level-{ns.n} return point needs "
            f"R = {ns.n + 1}; adjust --u0/--delta1")
    grid = np.linspace(ns.delta0_min, ns.delta0_max, ns.points)

    def resid(delta0: float) -> float:
        delta0 = float(delta0)
        if abs(delta0) < DELTA0_CLAMP:
            delta0 = DELTA0_CLAMP if delta0 >= 0 else -DELTA0_CLAMP
        return return_spectrum_relation(
            LorentzianModel(ns.u0, delta0, ns.delta1), ns.n)

    if ns.jobs > 1:
        with ThreadPoolExecutor(max_workers=ns.jobs) as ex:
            values = list(ex.map(resid, grid))
    else:
        values = [resid(d) for d in grid]
    best_delta0, best_residual = locate_return_delta0(
        ns.u0, ns.delta1, ns.n, ns.delta0_min, ns.delta0_max,
        points=ns.points)
    i_min = int(np.argmin(values))
    LOG.info("scan minimum %.6g at delta0 = %.6g, refined to %.6g",
             values[i_min], grid[i_min], best_delta0)
    results = {"located": {"delta0": best_delta0, "residual": best_residual},
               "table": {"columns": ["delta0", "residual"],
                         "rows": [[float(d), float(v)]
                                  for d, v in zip(grid, values)]}}
    diagnostics = {"R": probe.R, "points": ns.points, "jobs": ns.jobs,
                   "grid_minimum": {"delta0": float(grid[i_min]),
                                    "residual": float(values[i_min])}}
    return results, diagnostics


COMMANDS = {
    "eval-1f1": CommandSpec(
        "evaluate the confluent hypergeometric function 1F1(a; c; x)",
        (Opt("a", "complex", REQUIRED, "upper parameter"),
         Opt("c", "complex", REQUIRED, "lower parameter"),
         Opt("x", "complex", REQUIRED, "argument"),
         Opt("tol", "float", DEFAULT_TOL, "relative tail target"),
         Opt("max-terms", "int", DEFAULT_MAX_TERMS, "series length cap")),
        run_eval_1f1),
    "verify-identities": CommandSpec(
        "check the derivative and contiguous-parameter identities",
        (Opt("identity", ("all",) + IDENTITY_IDS, "all", "which identity"),
         Opt("a", "complex", None, "upper parameter (point mode)"),
         Opt("c", "complex", None, "lower parameter (point mode)"),
         Opt("x", "complex", None, "argument (point mode)"),
         Opt("draws", "int", 200, "random draws in sweep mode"),
         Opt("seed", "int", 0, "RNG seed for the sweep"),
         Opt("radius", "float", 5.0, "argument disk radius for the sweep")),
        run_verify_identities),
    "che-series": CommandSpec(
        "build a Kummer-function series solution and evaluate it",
        (Opt("family", _FAMILY_CHOICES, REQUIRED, "expansion family"),)
        + _CHE_OPTS +
        (Opt("z", "complex", REQUIRED, "evaluation point"),
         Opt("n-terms", "int", 30, "number of coefficients to build"),
         Opt("alpha0-choice", _ALPHA0_CHOICES, None,
             "starting upper parameter for the b3 family"),
         Opt("s0", "complex", None, "scale factor (b4 family only)")),
        run_che_series),
    "frobenius": CommandSpec(
        "evaluate the analytic power-series solution at the origin",
        _CHE_OPTS +
        (Opt("z", "complex", REQUIRED, "evaluation point"),
         Opt("k-terms", "int", 60, "number of power-series coefficients")),
        run_frobenius),
    "transform": CommandSpec(
        "map the equation parameters under z -> 1 - z",
        _CHE_OPTS,
        run_transform),
    "detect-termination": CommandSpec(
        "find integer parameter coincidences that allow a finite series",
        (Opt("family", _FAMILY_CHOICES, REQUIRED, "expansion family"),)
        + _CHE_OPTS +
        (Opt("alpha0-choice", _ALPHA0_CHOICES, None,
             "starting upper parameter for the b3 family"),
         Opt("all", "flag", False, "list every admissible condition")),
        run_detect_termination),
    "q-spectrum": CommandSpec(
        "accessory-parameter values that terminate the series (q is ignored)",
        (Opt("family", _FAMILY_CHOICES, REQUIRED, "expansion family"),)
        + _CHE_OPTS +
        (Opt("alpha0-choice", _ALPHA0_CHOICES, None,
             "starting upper parameter for the b3 family"),
         Opt("kind", _KIND_CHOICES, None, "force this condition kind"),
         Opt("n", "int", None, "force this termination index")),
        run_q_spectrum),
    "two-state": CommandSpec(
        "solve the Lorentzian-pulse two-state problem both ways and compare",
        (Opt("u0", "float", REQUIRED, "coupling amplitude"),
         Opt("delta0", "float", REQUIRED, "constant detuning rate"),
         Opt("delta1", "float", REQUIRED, "Lorentzian detuning amplitude"),
         Opt("t-start", "float", -5.0, "window start"),
         Opt("t-end", "float", 5.0, "window end"),
         Opt("steps", "int", 8000, "RK grid steps"),
         Opt("n-terms", "int", 16, "series length for the closed form"),
         Opt("samples", "int", 101, "comparison sample count"),
         Opt("family", ("a2", "b3", "c"), "b3", "expansion family")),
        run_two_state),
    "return-spectrum-scan": CommandSpec(
        "scan the detuning rate for points where the series terminates",
        (Opt("u0", "float", REQUIRED, "coupling amplitude"),
         Opt("delta1", "float", REQUIRED, "Lorentzian detuning amplitude"),
         Opt("n", "int", REQUIRED, "termination level (needs R = n+1)"),
         Opt("delta0-min", "float", REQUIRED, "scan lower bound"),
         Opt("delta0-max", "float", REQUIRED, "scan upper bound"),
         Opt("points", "int", 41, "grid size")),
        run_return_spectrum_scan),
}


# ---------------------------------------------------------------------------
# argument plumbing

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heunkummer",
        description="Kummer-function series solutions of the confluent "
                    "Heun equation")
    parser.add_argument("--replay", metavar="FILE",
                        help="re-run a saved output record byte-identically")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, spec in COMMANDS.items():
        sp = sub.add_parser(name, help=spec.summary, description=spec.summary)
        for opt in COMMON_OPTS + spec.opts:
            flag = "--" + opt.name
            if opt.conv == "flag":
                sp.add_argument(flag, action="store_true",
                                default=argparse.SUPPRESS, help=opt.help)
            elif isinstance(opt.conv, tuple):
                sp.add_argument(flag, choices=list(opt.conv),
                                default=argparse.SUPPRESS, help=opt.help)
            else:
                sp.add_argument(flag, type=str, default=argparse.SUPPRESS,
                                help=opt.help, metavar=opt.conv.upper())
    return parser


def _convert(parser, command: str, opt: Opt, text: str):
    try:
        if isinstance(opt.conv, tuple):
            if text not in opt.conv:
                raise ValueError(f"must be one of {', '.join(opt.conv)}")
            return text
        if opt.conv == "complex":
            return parse_complex(text)
        if opt.conv == "float":
            return float(text)
        if opt.conv == "int":
            return int(text)
        if opt.conv == "flag":
            return text.strip().lower() in ("1", "true", "yes", "on")
        return text
    except ValueError as exc:
        parser.error(f"{command}: bad value for --{opt.name}: {exc}")


def _read_config(parser, path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        out[key.strip().replace("_", "-")] = value.strip()
    return out


def _input_repr(opt: Opt, value):
    if opt.conv == "flag":
        return bool(value)
    if opt.conv == "complex":
        return format_complex(value)
    if opt.conv == "float":
        return float(value)
    if opt.conv == "int":
        return int(value)
    return str(value)


def _resolve_options(parser, command: str, spec: CommandSpec, parsed):
    supplied = vars(parsed)
    config = {}
    config_path = supplied.get("config")
    if config_path:
        config = _read_config(parser, config_path)
    ns = argparse.Namespace(command=command)
    inputs = {}
    all_opts = COMMON_OPTS + spec.opts
    for opt in all_opts:
        dest = opt.name.replace("-", "_")
        if dest in supplied:
            value = supplied[dest]
            if isinstance(value, str) and not isinstance(opt.conv, tuple) \
                    and opt.conv not in ("str", "flag"):
                value = _convert(parser, command, opt, value)
        elif opt.name in config:
            value = _convert(parser, command, opt, config[opt.name])
        else:
            value = opt.default
            if value is REQUIRED:
                parser.error(f"{command}: --{opt.name} is required")
        setattr(ns, dest, value)
        if opt.name == "config" or value is None:
            continue
        inputs[opt.name] = _input_repr(opt, value)
    known = {o.name for o in all_opts}
    for key in config:
        if key not in known:
            LOG.warning("config key %r is not an option of %s", key, command)
    return ns, inputs


def _expand_replay(argv: list, parser) -> list:
    if "--replay" not in argv:
        return argv
    i = argv.index("--replay")
    if i + 1 >= len(argv):
        parser.error("--replay needs a file argument")
    path = argv[i + 1]
    try:
        with open(path, encoding="utf-8") as fh:
            record = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read replay file: {exc}")
    command = record.get("command")
    inputs = record.get("inputs")
    if not isinstance(command, str) or not isinstance(inputs, dict):
        parser.error("replay file must carry 'command' and 'inputs'")
    rebuilt = [command]
    for key, value in inputs.items():
        if isinstance(value, bool):
            if value:
                rebuilt.append(f"--{key}")
        else:
            text = value if isinstance(value, str) else \
                repr(value) if isinstance(value, float) else str(value)
            rebuilt.append(f"--{key}={text}")
    # anything else on the line overrides the recorded inputs
    return rebuilt + argv[:i] + argv[i + 2:]


def _setup_logging() -> None:
    name = os.environ.get("HEUN_LOG_LEVEL", "warn").strip().lower()
    level = _LOG_LEVELS.get(name)
    logging.basicConfig(stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("heunkummer").setLevel(
        level if level is not None else logging.WARNING)
    if level is None and name not in ("", "warn"):
        LOG.warning("HEUN_LOG_LEVEL %r not recognized; using warn", name)


def main(argv=None) -> int:
    _setup_logging()
    raw = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        raw = _expand_replay(raw, parser)
        parsed = parser.parse_args(raw)
        command = getattr(parsed, "command", None)
        if command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        spec = COMMANDS[command]
        ns, inputs = _resolve_options(parser, command, spec, parsed)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    record = {"command": command, "inputs": inputs}
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, diagnostics = spec.runner(ns)
        diagnostics["warnings"] = [
            f"{type(w.message).__name__}: {w.message}" for w in caught]
        record["results"] = results
        record["diagnostics"] = diagnostics
    except (HeunKummerError, ZeroDivisionError, ValueError) as exc:
        LOG.error("%s: %s", type(exc).__name__, exc)
        record["error"] = {"type": type(exc).__name__, "message": str(exc)}
        sys.stdout.write(render_json(record))
        return EXIT_DOMAIN

    text = render_csv(record) if ns.format == "csv" else render_json(record)
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

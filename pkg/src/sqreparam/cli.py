"""Command line interface: problem files in, reports and CSV out.

A problem file is a small UTF-8 JSON object:

    {
      "n": 2,
      "f": {"Q": [[1, 0], [0, 1]], "q": [-1, 1], "r": 1.0},
      "g": {
        "pieces": [{"a": [1, 0], "b": 0.0}],
        "domain": {"A_ineq": [[1, 1]], "b_ineq": [2.0],
                   "A_eq": [], "b_eq": []}
      },
      "meta": {"name": "demo"}
    }

Every block except "n" is optional: f defaults to the zero quadratic,
pieces to the empty list (plain indicator), domain to the nonnegative
orthant.  Domains are always intersected with the orthant.  meta may
carry "known_minimizer", "known_alpha", "known_gamma".

Exit codes: 0 success, 2 parse error, 3 validation error, 4 numerical
failure, 5 inconsistency detected.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySet,
    InconsistencyDetected,
    InfeasiblePolyhedron,
    InsufficientTrace,
    InvalidRange,
    NotAMinimizer,
    NotAStationaryPoint,
    NotConvex,
    NotStationaryError,
    OutOfDomain,
    ParseError,
    SqreparamError,
    TooLarge,
    UnboundedPolyhedron,
    UnsupportedProblemClass,
    ValidationError,
)
from .kl_lab import (
    ExponentInputs,
    ScatterConfig,
    estimate_exponent,
    fit_rate,
    run_first_order,
    sample_scatter,
    strict_complementarity,
)
from .oracles import (
    OracleConfig,
    enumerate_vertices,
    fd_second_subderivative,
    grid_min_norm,
    grid_min_norm_gap_bound,
    random_lp_instance,
    random_nonsmooth_instance,
    random_orthant_instance,
)
from .polyfunc import (
    CompositeProblem,
    PolyhedralFunction,
    SmoothQuadratic,
    g_eval,
    g_subdiff,
    phi_value,
)
from .polyhedra import (
    DEFAULT_TOL,
    GeneratorSet,
    LPStatus,
    Polyhedron,
    lp_solve,
    project_onto_polyhedron,
    vrep_ri_membership,
)
from .reparam import DEFAULT_TOL_SUPPORT, classify_first_order, lifted_residual
from .second_order import correspondence_check, d2_lifted_g

_EXIT_OK = 0
_EXIT_PARSE = 2
_EXIT_VALIDATION = 3
_EXIT_NUMERICAL = 4
_EXIT_INCONSISTENT = 5

_VALIDATION_ERRORS = (
    ValidationError,
    DimensionMismatch,
    InvalidRange,
    OutOfDomain,
    NotAStationaryPoint,
    NotAMinimizer,
    NotConvex,
    NotStationaryError,
    TooLarge,
    UnsupportedProblemClass,
    EmptySet,
    InfeasiblePolyhedron,
    UnboundedPolyhedron,
)


# ---------------------------------------------------------------------------
# Problem files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProblemFile:
    """A parsed problem plus its free-form metadata block."""

    problem: CompositeProblem
    meta: dict


_TOP_KEYS = {"n", "f", "g", "meta"}
_F_KEYS = {"Q", "q", "r"}
_G_KEYS = {"pieces", "domain"}
_DOM_KEYS = {"A_ineq", "b_ineq", "A_eq", "b_eq"}
_PIECE_KEYS = {"a", "b"}


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"{where}: unknown field {unknown[0]!r}")


def _as_block(data: dict, key: str, where: str) -> dict:
    block = data.get(key)
    if block is None:
        return {}
    if not isinstance(block, dict):
        raise ParseError(f"{where}.{key}: expected an object")
    return block


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _num_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array of numbers")
    return [_num(v, where) for v in value]


def _num_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array of row arrays")
    rows = [_num_list(row, f"{where}[{i}]") for i, row in enumerate(value)]
    if not rows:
        return np.zeros((0, 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError(f"{where}: rows have unequal lengths")
    return np.array(rows)


def _shaped_matrix(block: dict, key: str, n: int, where: str,
                   rows_free: bool = True) -> np.ndarray | None:
    if key not in block:
        return None
    mat = _num_matrix(block[key], f"{where}.{key}")
    if mat.size == 0:
        return np.zeros((0, n))
    if mat.shape[1] != n or (not rows_free and mat.shape[0] != n):
        want = f"{n} x {n}" if not rows_free else f"m x {n}"
        raise ValidationError(
            f"{where}.{key}: expected shape {want}, got {mat.shape[0]} x {mat.shape[1]}")
    return mat


def parse_problem_dict(data, where: str = "problem") -> ProblemFile:
    """Build a validated ProblemFile from a decoded JSON object."""
    if not isinstance(data, dict):
        raise ParseError(f"{where}: top level must be an object")
    _check_keys(data, _TOP_KEYS, where)
    if "n" not in data:
        raise ParseError(f"{where}: missing field 'n'")
    n_raw = data["n"]
    if isinstance(n_raw, bool) or not isinstance(n_raw, int):
        raise ParseError(f"{where}.n: expected an integer, got {n_raw!r}")
    if n_raw < 1:
        raise ValidationError(f"{where}.n: must be at least 1, got {n_raw}")
    n = n_raw

    fblock = _as_block(data, "f", where)
    _check_keys(fblock, _F_KEYS, f"{where}.f")
    Q = _shaped_matrix(fblock, "Q", n, f"{where}.f", rows_free=False)
    q = (_num_list(fblock["q"], f"{where}.f.q") if "q" in fblock else None)
    if q is not None and len(q) != n:
        raise ValidationError(f"{where}.f.q: expected {n} entries, got {len(q)}")
    r = _num(fblock["r"], f"{where}.f.r") if "r" in fblock else 0.0

    gblock = _as_block(data, "g", where)
    _check_keys(gblock, _G_KEYS, f"{where}.g")
    pieces = gblock.get("pieces", [])
    if not isinstance(pieces, list):
        raise ParseError(f"{where}.g.pieces: expected an array")
    pieces_A = []
    pieces_b = []
    for i, piece in enumerate(pieces):
        pwhere = f"{where}.g.pieces[{i}]"
        if not isinstance(piece, dict):
            raise ParseError(f"{pwhere}: expected an object with 'a' and 'b'")
        _check_keys(piece, _PIECE_KEYS, pwhere)
        if "a" not in piece:
            raise ParseError(f"{pwhere}: missing field 'a'")
        a = _num_list(piece["a"], f"{pwhere}.a")
        if len(a) != n:
            raise ValidationError(
                f"{pwhere}.a: expected {n} entries, got {len(a)}")
        pieces_A.append(a)
        pieces_b.append(_num(piece["b"], f"{pwhere}.b") if "b" in piece else 0.0)

    dom_block = _as_block(gblock, "domain", f"{where}.g")
    _check_keys(dom_block, _DOM_KEYS, f"{where}.g.domain")
    A_ineq = _shaped_matrix(dom_block, "A_ineq", n, f"{where}.g.domain")
    A_eq = _shaped_matrix(dom_block, "A_eq", n, f"{where}.g.domain")
    b_ineq = (_num_list(dom_block["b_ineq"], f"{where}.g.domain.b_ineq")
              if "b_ineq" in dom_block else None)
    b_eq = (_num_list(dom_block["b_eq"], f"{where}.g.domain.b_eq")
            if "b_eq" in dom_block else None)

    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError(f"{where}.meta: expected an object")

    try:
        f = SmoothQuadratic(Q if Q is not None else np.zeros((n, n)),
                            q if q is not None else np.zeros(n), r)
        domain = Polyhedron(n, A_ineq, b_ineq, A_eq, b_eq)
        g = PolyhedralFunction(
            n,
            np.array(pieces_A) if pieces_A else None,
            np.array(pieces_b) if pieces_b else None,
            domain)
        problem = CompositeProblem(f, g)
    except InfeasiblePolyhedron as err:
        raise ValidationError(f"{where}: empty domain ({err})") from err
    except DimensionMismatch as err:
        raise ValidationError(f"{where}: {err}") from err
    return ProblemFile(problem, dict(meta))


def parse_problem_file(path) -> ProblemFile:
    """Read, decode, and validate a JSON problem file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    return parse_problem_dict(data, where=str(path))


def serialize_problem(pf: ProblemFile) -> dict:
    """Inverse of parse_problem_dict, full precision."""
    p = pf.problem
    dom = p.g.domain
    return {
        "n": p.n,
        "f": {"Q": p.f.Q.tolist(), "q": p.f.q.tolist(), "r": p.f.r},
        "g": {
            "pieces": [{"a": a.tolist(), "b": float(b)}
                       for a, b in zip(p.g.pieces_A, p.g.pieces_b)],
            "domain": {"A_ineq": dom.A_ineq.tolist(),
                       "b_ineq": dom.b_ineq.tolist(),
                       "A_eq": dom.A_eq.tolist(),
                       "b_eq": dom.b_eq.tolist()},
        },
        "meta": dict(pf.meta),
    }


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def format_field(value) -> str:
    """CSV field text: floats at 17 significant digits, exact round trip."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def emit_csv(rows, path, header=()) -> None:
    """Write rows as RFC-4180-style CSV: LF endings, minimal quoting."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        if header:
            writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_field(v) for v in row])


# ---------------------------------------------------------------------------
# Shared command plumbing
# ---------------------------------------------------------------------------


def _parse_vector_arg(text: str, n: int, flag: str) -> np.ndarray:
    body = text.strip().strip("[]()")
    parts = [p.strip() for p in body.replace(";", ",").split(",") if p.strip()]
    try:
        values = [float(p) for p in parts]
    except ValueError as err:
        raise ParseError(
            f"{flag}: cannot parse {text!r} as comma-separated floats") from err
    if len(values) != n:
        raise ValidationError(
            f"{flag}: expected {n} components, got {len(values)}")
    return np.array(values)


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    if isinstance(value, np.ndarray):
        return "[" + ", ".join(format(float(v), ".12g") for v in value) + "]"
    if isinstance(value, tuple):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    return str(value)


def _kv(key: str, value) -> None:
    print(f"{key} = {_fmt(value)}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_certify(args) -> int:
    pf = parse_problem_file(args.file)
    p = pf.problem
    y = _parse_vector_arg(args.y, p.n, "--y")
    _kv("command", "certify")
    _kv("problem", args.file)
    _kv("n", p.n)
    _kv("y", y)
    report = classify_first_order(p, y, tol=args.tol,
                                  tol_support=args.tol_support)
    _kv("in_domain", report.in_domain)
    _kv("support", list(report.support))
    _kv("lifted_residual", report.lifted_residual)
    _kv("phi_residual", report.phi_residual)
    _kv("min_support_abs", report.min_support_abs)
    _kv("degenerate_activity", report.degenerate_activity)
    _kv("stationary_for_Phi", report.stationary_for_Phi)
    _kv("stationary_for_phi", report.stationary_for_phi)
    if not report.in_domain:
        print("second_order = skipped (y*y lies outside the domain of g)")
        return _EXIT_OK
    corr = correspondence_check(p, y, tol=args.tol,
                                tol_support=args.tol_support)
    _kv("second_order_nonneg_on_SI", corr.second_order_nonneg_on_SI)
    if corr.witness_lambda is not None:
        _kv("witness_lambda", np.asarray(corr.witness_lambda))
    if corr.negative_direction is not None:
        _kv("negative_direction", np.asarray(corr.negative_direction))
    _kv("consistent", corr.consistent)
    return _EXIT_OK


def _cmd_strict_comp(args) -> int:
    pf = parse_problem_file(args.file)
    p = pf.problem
    x = _parse_vector_arg(args.x, p.n, "--x")
    _kv("command", "strict-comp")
    _kv("problem", args.file)
    _kv("x", x)
    _kv("strict_complementarity", strict_complementarity(p, x, tol=args.tol))
    return _EXIT_OK


def _cmd_kl_fit(args) -> int:
    pf = parse_problem_file(args.file)
    p = pf.problem
    y = _parse_vector_arg(args.y, p.n, "--y")
    config = ScatterConfig(delta_min=args.dmin, delta_max=args.dmax,
                           seed=args.seed)
    inputs = None
    if args.alpha is not None:
        inputs = ExponentInputs(args.alpha, bool(args.strict), args.gamma)
    _kv("command", "kl-fit")
    _kv("problem", args.file)
    _kv("y", y)
    _kv("seed", args.seed)
    _kv("delta_min", config.delta_min)
    _kv("delta_max", config.delta_max)
    samples = sample_scatter(p, y, config)
    report = estimate_exponent(p, y, config, inputs, samples=samples)
    _kv("n_samples", report.n_samples)
    _kv("n_bins_used", report.n_bins_used)
    _kv("gap_range", report.gap_range)
    _kv("alpha_hat", report.alpha_hat)
    _kv("r_squared", report.r_squared)
    if report.predicted is not None:
        _kv("predicted", report.predicted)
        _kv("verdict", report.verdict)
    if args.out:
        emit_csv([(args.seed, gap, res) for gap, res in samples],
                 args.out, header=("seed", "gap", "residual"))
        _kv("out", args.out)
    return _EXIT_OK


def _cmd_solve(args) -> int:
    pf = parse_problem_file(args.file)
    p = pf.problem
    if args.variant == "original":
        if args.x0 is None:
            raise ValidationError("--variant original needs --x0")
        start = _parse_vector_arg(args.x0, p.n, "--x0")
    else:
        if args.y0 is None:
            raise ValidationError("--variant lifted needs --y0")
        start = _parse_vector_arg(args.y0, p.n, "--y0")
    f_star = None
    if "known_minimizer" in pf.meta:
        xm = np.asarray(pf.meta["known_minimizer"], dtype=float).ravel()
        if xm.size != p.n:
            raise ValidationError("meta.known_minimizer has the wrong length")
        f_star = phi_value(p, xm)
    _kv("command", "solve")
    _kv("problem", args.file)
    _kv("variant", args.variant)
    _kv("steps_requested", args.steps)
    if f_star is not None:
        _kv("f_star", f_star)
    trace = run_first_order(p, args.variant, start, steps=args.steps,
                            f_star=f_star)
    _kv("iterates", len(trace.iterates))
    last = trace.iterates[-1]
    _kv("final_gap", last[1])
    _kv("final_residual", last[2])
    try:
        rate = fit_rate(trace)
        _kv("rate_kind", rate.kind)
        _kv("rate_parameter", rate.parameter)
        _kv("rate_r_squared", rate.r_squared)
    except InsufficientTrace as err:
        _kv("rate_kind", f"undetermined ({err})")
    if args.out:
        emit_csv(trace.iterates, args.out,
                 header=("k", "gap", "residual", "step"))
        _kv("out", args.out)
    return _EXIT_OK


# ---------------------------------------------------------------------------
# Self test batteries (fast oracle-agreement checks)
# ---------------------------------------------------------------------------


def _st_lp_vs_enumeration(seed: int, count: int = 60):
    worst = 0.0
    for s in range(count):
        c, P = random_lp_instance(seed + s)
        out = lp_solve(c, None, None, P.A_eq, P.b_eq, P.A_ineq, P.b_ineq)
        if out.status is not LPStatus.OPTIMAL:
            return False, f"instance {s}: status {out.status.name}"
        verts = enumerate_vertices(P)
        if verts.shape[0] == 0:
            return False, f"instance {s}: no vertices found"
        truth = float(np.max(verts @ c))
        err = abs(out.value - truth) / (1.0 + abs(truth))
        if err > 1e-9:
            return False, f"instance {s}: value off by {err:.2e}"
        if abs(out.duality_gap) > 1e-9 * (1.0 + abs(out.value)):
            return False, f"instance {s}: duality gap {out.duality_gap:.2e}"
        worst = max(worst, err)
    return True, f"{count} instances, worst relative value gap {worst:.1e}"


def _st_projection_idempotence(seed: int, count: int = 40):
    worst = 0.0
    for s in range(count):
        _, P = random_lp_instance(seed + 10_000 + s)
        rng = np.random.default_rng(seed + 20_000 + s)
        z = 4.0 * rng.standard_normal(P.n)
        p1 = project_onto_polyhedron(P, z)
        p2 = project_onto_polyhedron(P, p1, start=p1)
        drift = float(np.linalg.norm(p1 - p2)) / (1.0 + float(np.linalg.norm(p1)))
        if drift > 1e-9:
            return False, f"instance {s}: projection drift {drift:.2e}"
        if P.max_violation(p1) > 1e-8:
            return False, f"instance {s}: infeasible projection"
        worst = max(worst, drift)
    return True, f"{count} instances, worst drift {worst:.1e}"


def _st_smooth_identity(seed: int, count: int = 50):
    worst = 0.0
    for s in range(count):
        p, y = random_orthant_instance(seed + s)
        analytic = float(np.linalg.norm(2.0 * y * p.f.grad(y * y)))
        err = abs(lifted_residual(p, y) - analytic) / (1.0 + analytic)
        if err > 1e-8:
            return False, f"instance {s}: residual off by {err:.2e}"
        worst = max(worst, err)
    return True, f"{count} instances, worst relative error {worst:.1e}"


def _st_grid_agreement(seed: int, count: int = 8):
    cfg = OracleConfig(grid_resolution=12)
    for s in range(count):
        p, y = random_nonsmooth_instance(seed + s)
        x = y * y
        S = g_subdiff(p.g, x)
        weights = np.abs(y)
        half = 0.5 * lifted_residual(p, y)
        grid = grid_min_norm(S, p.f.grad(x), weights, cfg)
        bound = grid_min_norm_gap_bound(S, weights, cfg)
        if grid < half - 1e-7 * (1.0 + half):
            return False, f"instance {s}: grid {grid:.6g} beats QP {half:.6g}"
        if grid - half > bound + 1e-9:
            return False, (f"instance {s}: grid gap {grid - half:.3g} "
                           f"exceeds bound {bound:.3g}")
    return True, f"{count} instances within grid tolerance"


def _st_ri_catalog(_seed: int):
    cases = []
    seg = GeneratorSet(1, points=[[0.0], [2.0]])
    cases += [(seg, [1.0], True), (seg, [2.0], False), (seg, [0.0], False)]
    halfline = GeneratorSet(1, points=[[0.0]], rays=[[1.0]])
    cases += [(halfline, [0.0], False), (halfline, [1.0], True)]
    corner = GeneratorSet(2, points=[[0.0, 0.0]],
                          rays=[[-1.0, 0.0], [0.0, -1.0]])
    cases += [(corner, [-1.0, -1.0], True), (corner, [-1.0, 0.0], False),
              (corner, [0.0, 0.0], False)]
    strip = GeneratorSet(2, points=[[0.0, 1.0]], rays=[[0.0, -1.0]])
    cases += [(strip, [0.0, 0.0], True), (strip, [0.0, 1.0], False),
              (strip, [1.0, 0.0], False)]
    line = GeneratorSet(2, points=[[0.0, 0.0]], lines=[[1.0, 0.0]])
    cases += [(line, [3.0, 0.0], True), (line, [0.0, 0.1], False)]
    point = GeneratorSet(2, points=[[0.5, -0.5]])
    cases += [(point, [0.5, -0.5], True), (point, [0.5, 0.5], False)]
    for i, (S, z, expect) in enumerate(cases):
        if vrep_ri_membership(S, np.array(z)) is not expect:
            return False, f"case {i}: expected {expect}"
    return True, f"{len(cases)} catalog cases"


def _st_d2_designed(_seed: int):
    orthant2 = PolyhedralFunction.orthant_indicator(2)
    val = d2_lifted_g(orthant2, [1.0, 0.0], [0.0, -3.0], [0.0, 1.0])
    if abs(val) > 1e-9:
        return False, f"orthant case: {val!r} instead of 0"
    fd = fd_second_subderivative(
        lambda yv: g_eval(orthant2, yv * yv), np.array([1.0, 0.0]),
        np.zeros(2), np.array([0.0, 1.0]))
    if abs(fd - val) > 0.05 * (1.0 + abs(val)):
        return False, f"orthant case: fd {fd!r} vs {val!r}"

    simplex2 = PolyhedralFunction.simplex_indicator(2)
    val = d2_lifted_g(simplex2, [1.0, 0.0], [1.0, 0.0], [0.0, 1.0])
    if abs(val - 2.0) > 1e-9:
        return False, f"simplex case: {val!r} instead of 2"
    fd = fd_second_subderivative(
        lambda yv: g_eval(simplex2, yv * yv), np.array([1.0, 0.0]),
        np.array([2.0, 0.0]), np.array([0.0, 1.0]))
    if abs(fd - val) > 0.05 * (1.0 + abs(val)):
        return False, f"simplex case: fd {fd!r} vs {val!r}"

    origin1 = PolyhedralFunction.indicator(
        Polyhedron(1, A_eq=[[1.0]], b_eq=[0.0]))
    val = d2_lifted_g(origin1, [0.0], [0.0], [1.0])
    if val != float("inf"):
        return False, f"point case: {val!r} instead of +inf"
    fd = fd_second_subderivative(
        lambda yv: g_eval(origin1, yv * yv), np.zeros(1), np.zeros(1),
        np.ones(1))
    if fd != float("inf"):
        return False, f"point case: fd {fd!r} instead of +inf"
    return True, "3 designed cases, finite ones fd-checked"


_SELFTEST_GROUPS = (
    ("lp-vs-vertex-enumeration", _st_lp_vs_enumeration),
    ("projection-idempotence", _st_projection_idempotence),
    ("smooth-lift-residual-identity", _st_smooth_identity),
    ("nonsmooth-residual-grid-agreement", _st_grid_agreement),
    ("ri-membership-catalog", _st_ri_catalog),
    ("second-subderivative-designed-cases", _st_d2_designed),
)


def _cmd_selftest(args) -> int:
    _kv("command", "selftest")
    _kv("seed", args.seed)
    failures = 0
    for name, battery in _SELFTEST_GROUPS:
        ok, detail = battery(args.seed)
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        failures += 0 if ok else 1
    total = len(_SELFTEST_GROUPS)
    print(f"selftest: {total - failures}/{total} groups passed")
    return _EXIT_OK if failures == 0 else _EXIT_INCONSISTENT


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def _add_tol_flags(sub) -> None:
    sub.add_argument("--tol", type=float, default=DEFAULT_TOL,
                     help="stationarity tolerance (default 1e-9)")
    sub.add_argument("--tol-support", dest="tol_support", type=float,
                     default=DEFAULT_TOL_SUPPORT,
                     help="support threshold on |y_i| (default 1e-8)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqreparam",
        description="Stationarity certification and sharpness experiments "
                    "for square-reparameterized composite problems.")
    subs = parser.add_subparsers(dest="cmd", required=True)

    certify = subs.add_parser(
        "certify", help="first- and second-order stationarity report")
    certify.add_argument("file")
    certify.add_argument("--y", required=True,
                         help="point, comma-separated floats")
    _add_tol_flags(certify)
    certify.set_defaults(handler=_cmd_certify)

    strict = subs.add_parser(
        "strict-comp", help="strict complementarity at a stationary x")
    strict.add_argument("file")
    strict.add_argument("--x", required=True,
                        help="point, comma-separated floats")
    strict.add_argument("--tol", type=float, default=DEFAULT_TOL)
    strict.set_defaults(handler=_cmd_strict_comp)

    klfit = subs.add_parser(
        "kl-fit", help="sample a residual scatter and fit the exponent")
    klfit.add_argument("file")
    klfit.add_argument("--y", required=True)
    klfit.add_argument("--alpha", type=float, default=None,
                       help="original exponent, enables the prediction")
    klfit.add_argument("--gamma", type=float, default=None,
                       help="certification order for the nonstrict transfer")
    klfit.add_argument("--strict", action="store_true",
                       help="assume strict complementarity in the prediction")
    klfit.add_argument("--seed", type=int, default=0)
    klfit.add_argument("--dmin", type=float, default=1e-6)
    klfit.add_argument("--dmax", type=float, default=1e-2)
    klfit.add_argument("--out", default=None, help="scatter CSV path")
    klfit.set_defaults(handler=_cmd_kl_fit)

    solve = subs.add_parser(
        "solve", help="run a first-order method and classify its rate")
    solve.add_argument("file")
    solve.add_argument("--variant", choices=("original", "lifted"),
                       required=True)
    solve.add_argument("--y0", default=None, help="lifted start point")
    solve.add_argument("--x0", default=None, help="original start point")
    solve.add_argument("--steps", type=int, default=10000)
    solve.add_argument("--out", default=None, help="trace CSV path")
    solve.set_defaults(handler=_cmd_solve)

    selftest = subs.add_parser(
        "selftest", help="run the oracle-agreement batteries")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.set_defaults(handler=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return _EXIT_PARSE
    except _VALIDATION_ERRORS as err:
        print(f"validation error: {err}", file=sys.stderr)
        return _EXIT_VALIDATION
    except InconsistencyDetected as err:
        print(f"inconsistency detected: {err}", file=sys.stderr)
        report = getattr(err, "report", None)
        if report is not None:
            print(f"report: {report}", file=sys.stderr)
        return _EXIT_INCONSISTENT
    except SqreparamError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return _EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Second-order tests for lifted candidates.

For a lifted first-order point y with multiplier v (v matching the
negated smooth gradient on the support of y), the second subderivative
of the lifted polyhedral term on directions supported off the support
of y reduces to a support-function value over a slice of the
subdifferential:

    d2(w) = 2 * sup { <w*w restricted off-support, p off-support> :
                      p in subdiff g(y*y), p = v on the support }

which is a plain LP over the generator coefficients.  Nonnegativity of
the full lifted second-order quotient over all such directions is in
turn equivalent to feasibility of

    exists lambda in subdiff phi(y*y):  lambda = 0 on the support,
                                        lambda >= 0 off the support,

another LP.  correspondence_check runs both routes plus the original
first-order test and fails loudly when the advertised equivalence does
not hold numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistencyDetected,
    InfeasibleMultiplier,
    NotStationaryError,
    OutOfLiftedDomain,
    UnsupportedProblemClass,
)
from .polyfunc import (
    CompositeProblem,
    PolyhedralFunction,
    g_subdiff,
    is_orthant_indicator,
    phi_residual,
    phi_subdiff,
)
from .polyhedra import (
    DEFAULT_TOL,
    LPStatus,
    lp_solve,
    vrep_membership,
    _as_vector,
)
from .reparam import (
    DEFAULT_TOL_SUPPORT,
    lifted_residual,
    support_set,
)

_INF = float("inf")


@dataclass(frozen=True, eq=False)
class Multiplier:
    """First-order multiplier for a lifted point.

    v is a subgradient of g at y*y matching -grad f on the support;
    lam = 2 y o v is the corresponding multiplier for the lifted
    problem.
    """

    v: np.ndarray
    lam: np.ndarray


def _coefficient_lp(S, extra_eq_rows, extra_eq_rhs, extra_ineq_rows=None,
                    extra_ineq_rhs=None, objective=None):
    """LP over generator coefficients theta = (lam, mu, nu).

    Always includes the simplex row on the convex block and sign
    constraints on the convex and conic blocks.  extra rows act on
    theta.  Maximizes objective @ theta (zero objective by default).
    Returns the LPOutcome.
    """
    n_pts, n_rays, n_lin = S.n_points, S.n_rays, S.n_lines
    K = n_pts + n_rays + n_lin
    simplex_row = np.zeros((1, K))
    simplex_row[0, :n_pts] = 1.0
    A_eq = np.vstack([simplex_row] + ([extra_eq_rows] if len(extra_eq_rows) else []))
    b_eq = np.concatenate([np.ones(1)] + ([extra_eq_rhs] if len(extra_eq_rhs) else []))
    lower = np.concatenate([np.zeros(n_pts + n_rays), np.full(n_lin, -_INF)])
    c = objective if objective is not None else np.zeros(K)
    return lp_solve(c, lower, None, A_eq, b_eq, extra_ineq_rows,
                    extra_ineq_rhs)


def stationarity_multiplier(p: CompositeProblem, y,
                            tol: float = DEFAULT_TOL,
                            tol_support: float = DEFAULT_TOL_SUPPORT
                            ) -> Multiplier | None:
    """Multiplier certifying lifted stationarity of y, or None.

    Feasibility LP over the generator coefficients of subdiff g(y*y)
    with the support rows pinned to -grad f.  The verdict is
    cross-checked against the lifted residual; disagreement beyond the
    tolerance band raises InconsistencyDetected.
    """
    y = _as_vector(y, p.n, "y")
    x = y * y
    if not p.g.domain.contains(x, tol):
        raise OutOfLiftedDomain("y*y is outside the domain of g")
    S = g_subdiff(p.g, x, tol=tol)
    sup, _ = support_set(y, tol_support)
    G = S.generator_matrix()
    grad = p.f.grad(x)
    out = _coefficient_lp(S, G[sup, :], -grad[sup])

    residual = lifted_residual(p, y, tol_support, tol)
    scale = 1.0 + float(np.linalg.norm(grad))
    if out.status is LPStatus.OPTIMAL:
        if residual > 1e-6 * scale:
            raise InconsistencyDetected(
                f"multiplier found but lifted residual is {residual:.3e}")
        v = S.combine(out.witness)
        if not vrep_membership(S, v, 1e-7):
            raise InconsistencyDetected(
                "multiplier witness escaped the subdifferential")
        if sup.size and np.linalg.norm(v[sup] + grad[sup]) > 1e-7 * scale:
            raise InconsistencyDetected(
                "multiplier witness violates the support equations")
        return Multiplier(v, 2.0 * y * v)
    if residual <= tol * scale:
        raise InconsistencyDetected(
            f"no multiplier although lifted residual is {residual:.3e}")
    return None


def d2_lifted_g(g: PolyhedralFunction, ybar, v, w,
                tol: float = DEFAULT_TOL,
                tol_support: float = DEFAULT_TOL_SUPPORT) -> float:
    """Second subderivative of the lifted polyhedral term.

    Evaluated at ybar with multiplier 2 ybar o v, in a direction w that
    is forced into the off-support subspace by zeroing its support
    coordinates.  Computed as 2 * sup of a linear functional over the
    subdifferential slice {p : p = v on the support}; an unbounded LP
    means +inf, an infeasible one means the supplied v is not a valid
    slice anchor (InfeasibleMultiplier).
    """
    ybar = _as_vector(ybar, g.n, "ybar")
    v = _as_vector(v, g.n, "v")
    w = _as_vector(w, g.n, "w")
    x = ybar * ybar
    S = g_subdiff(g, x, tol=tol)
    sup, comp = support_set(ybar, tol_support)
    w_si = w.copy()
    w_si[sup] = 0.0

    G = S.generator_matrix()
    weights = np.zeros(g.n)
    weights[comp] = w_si[comp] ** 2
    objective = G.T @ weights
    out = _coefficient_lp(S, G[sup, :], v[sup], objective=objective)
    if out.status is LPStatus.UNBOUNDED:
        return _INF
    if out.status is LPStatus.INFEASIBLE:
        raise InfeasibleMultiplier(
            "no subgradient matches v on the support of ybar")
    return 2.0 * out.value


def _second_multiplier(p: CompositeProblem, y, S, sup) -> np.ndarray | None:
    """A second, generically different multiplier witness (or None)."""
    G = S.generator_matrix()
    grad = p.f.grad(y * y)
    objective = G.T @ np.ones(p.n)
    out = _coefficient_lp(S, G[sup, :], -grad[sup], objective=objective)
    if out.status is not LPStatus.OPTIMAL:
        return None
    return S.combine(out.witness)


def _d2_objective_given(p: CompositeProblem, y, w, v,
                        tol: float, tol_support: float) -> float:
    x = y * y
    sup, _ = support_set(y, tol_support)
    w_si = np.asarray(w, float).copy()
    w_si[sup] = 0.0
    quad = d2_lifted_g(p.g, y, v, w_si, tol, tol_support)
    if not np.isfinite(quad):
        return quad
    return quad + 2.0 * float(p.f.grad(x) @ (w_si * w_si))


def d2_lifted_objective_on_SI(p: CompositeProblem, y, w,
                              tol: float = DEFAULT_TOL,
                              tol_support: float = DEFAULT_TOL_SUPPORT
                              ) -> float:
    """Second-order quotient of the full lifted objective on the
    off-support subspace.

    Requires lifted stationarity (NotStationaryError otherwise).  The
    value must not depend on which multiplier witness anchors the
    subdifferential slice; when a second witness exists the computation
    is repeated and compared.
    """
    y = _as_vector(y, p.n, "y")
    w = _as_vector(w, p.n, "w")
    mult = stationarity_multiplier(p, y, tol, tol_support)
    if mult is None:
        raise NotStationaryError("y is not a lifted stationary point")
    value = _d2_objective_given(p, y, w, mult.v, tol, tol_support)

    x = y * y
    S = g_subdiff(p.g, x, tol=tol)
    sup, _ = support_set(y, tol_support)
    other = _second_multiplier(p, y, S, sup)
    if other is not None and np.max(np.abs(other - mult.v)) > 1e-9:
        second = _d2_objective_given(p, y, w, other, tol, tol_support)
        both_inf = not np.isfinite(value) and not np.isfinite(second)
        if not both_inf and abs(second - value) > 1e-8 * (1.0 + abs(value)):
            raise InconsistencyDetected(
                f"second-order value depends on the witness: "
                f"{value!r} vs {second!r}")
    return value


def d2_smooth_orthant_lift(p: CompositeProblem, y, w) -> float:
    """Closed-form second-order quotient when g is the orthant indicator.

    In that case the lifted objective is the smooth function f(y*y) on
    all of space and the quotient is the plain Hessian quadratic form,
    valid for arbitrary directions w:

        2 <grad f(x), w*w> + 4 <y o w, hess f(x) (y o w)>.
    """
    if not is_orthant_indicator(p.g):
        raise UnsupportedProblemClass(
            "closed form requires g to be the orthant indicator")
    y = _as_vector(y, p.n, "y")
    w = _as_vector(w, p.n, "w")
    x = y * y
    yw = y * w
    return float(2.0 * p.f.grad(x) @ (w * w) + 4.0 * yw @ (p.f.hess(x) @ yw))


@dataclass(frozen=True, eq=False)
class CorrespondenceReport:
    """Joint first/second-order verdict for a lifted candidate.

    consistent records the equivalence (stationary_for_Phi and
    second_order_nonneg_on_SI) == stationary_for_phi; a report with a
    false flag is never returned, the check raises instead.
    witness_lambda is the feasible original-problem multiplier when the
    second-order LP is feasible; negative_direction is a sampled
    direction with a negative second-order value when one was found.
    """

    stationary_for_Phi: bool
    second_order_nonneg_on_SI: bool
    stationary_for_phi: bool
    consistent: bool
    witness_lambda: np.ndarray | None = None
    negative_direction: np.ndarray | None = None


def correspondence_check(p: CompositeProblem, y, tol: float = DEFAULT_TOL,
                         tol_support: float = DEFAULT_TOL_SUPPORT,
                         n_dirs: int = 8, seed: int = 0
                         ) -> CorrespondenceReport:
    """Check the lifted/original stationarity correspondence at y.

    Route one: lifted first-order multiplier plus second-order
    nonnegativity on the off-support subspace, the latter decided by the
    feasibility LP for a sign-constrained original multiplier.  Route
    two: first-order stationarity of y*y for the original problem.  The
    two must agree; the second-order LP verdict is additionally
    cross-validated against sampled directional second-order values.
    """
    y = _as_vector(y, p.n, "y")
    x = y * y
    mult = stationarity_multiplier(p, y, tol, tol_support)
    lifted_stationary = mult is not None

    S = g_subdiff(p.g, x, tol=tol)
    sup, comp = support_set(y, tol_support)
    G = S.generator_matrix()
    grad = p.f.grad(x)
    ineq_rows = -G[comp, :] if comp.size else None
    ineq_rhs = grad[comp] if comp.size else None
    out = _coefficient_lp(S, G[sup, :], -grad[sup], ineq_rows, ineq_rhs)
    second_order = out.status is LPStatus.OPTIMAL
    witness_lambda = (grad + S.combine(out.witness)) if second_order else None

    res_phi = phi_residual(p, x, tol=tol)
    original_stationary = res_phi <= tol * (1.0 + float(np.linalg.norm(grad)))

    negative_direction = None
    if lifted_stationary:
        rng = np.random.default_rng(seed)
        directions = []
        for i in comp[:n_dirs]:
            e = np.zeros(p.n)
            e[i] = 1.0
            directions.append(e)
        while len(directions) < n_dirs and comp.size:
            d = np.zeros(p.n)
            d[comp] = rng.standard_normal(comp.size)
            norm = float(np.linalg.norm(d))
            if norm > 1e-12:
                directions.append(d / norm)
        for w in directions:
            val = _d2_objective_given(p, y, w, mult.v, tol, tol_support)
            if second_order and np.isfinite(val) and val < -1e-7 * (1.0 + abs(val)):
                raise InconsistencyDetected(
                    f"second-order LP feasible but direction {w} gives "
                    f"{val:.3e}")
            if not second_order and np.isfinite(val) and val < -tol:
                negative_direction = w

    if not lifted_stationary and second_order:
        raise InconsistencyDetected(
            "sign-constrained multiplier exists without lifted stationarity")

    consistent = (lifted_stationary and second_order) == original_stationary
    report = CorrespondenceReport(lifted_stationary, second_order,
                                  original_stationary, consistent,
                                  witness_lambda, negative_direction)
    if not consistent:
        raise InconsistencyDetected(
            "stationarity correspondence violated beyond tolerance", report)
    return report

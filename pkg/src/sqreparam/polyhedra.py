"""Dense LP/QP kernel and operations on small polyhedral sets.

Two representations are used throughout the package:

* ``Polyhedron``: half-space form ``A_ineq z <= b_ineq``, ``A_eq z = b_eq``.
* ``GeneratorSet``: generator form ``conv(points) + cone(rays) + span(lines)``.

Everything here is deterministic.  The LP solver is a dense two-phase
simplex with Bland's smallest-index rule (identical input gives an
identical optimal witness), and the QP solver is a primal active-set
method with smallest-index tie breaking.  Problems are desk scale (tens
of variables, tens of rows); the implementation favours exactness and
reproducibility over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySet,
    InfeasiblePolyhedron,
    NumericalFailure,
)

DEFAULT_TOL = 1e-9

_INF = float("inf")


def _as_matrix(rows, n: int, name: str) -> np.ndarray:
    """Coerce to a float matrix with n columns; empty input gives (0, n)."""
    if rows is None:
        return np.zeros((0, n))
    a = np.asarray(rows, dtype=float)
    if a.size == 0:
        return np.zeros((0, n))
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != n:
        raise DimensionMismatch(f"{name}: expected shape (*, {n}), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionMismatch(f"{name}: entries must be finite")
    return a


def _as_vector(v, m: int, name: str, allow_inf: bool = False) -> np.ndarray:
    if v is None:
        v = np.zeros(m)
    a = np.asarray(v, dtype=float).ravel()
    if a.size != m:
        raise DimensionMismatch(f"{name}: expected length {m}, got {a.size}")
    if not allow_inf and not np.all(np.isfinite(a)):
        raise DimensionMismatch(f"{name}: entries must be finite")
    if allow_inf and np.any(np.isnan(a)):
        raise DimensionMismatch(f"{name}: NaN entries are not allowed")
    return a


# ---------------------------------------------------------------------------
# Half-space representation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """Half-space form {z : A_ineq z <= b_ineq, A_eq z = b_eq}."""

    n: int
    A_ineq: np.ndarray = None
    b_ineq: np.ndarray = None
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DimensionMismatch(f"n must be a positive integer, got {self.n!r}")
        A_ineq = _as_matrix(self.A_ineq, self.n, "A_ineq")
        A_eq = _as_matrix(self.A_eq, self.n, "A_eq")
        b_ineq = _as_vector(self.b_ineq, A_ineq.shape[0], "b_ineq")
        b_eq = _as_vector(self.b_eq, A_eq.shape[0], "b_eq")
        for name, val in (("A_ineq", A_ineq), ("b_ineq", b_ineq),
                          ("A_eq", A_eq), ("b_eq", b_eq)):
            object.__setattr__(self, name, val)
            val.setflags(write=False)

    @property
    def m_ineq(self) -> int:
        return self.A_ineq.shape[0]

    @property
    def m_eq(self) -> int:
        return self.A_eq.shape[0]

    def max_violation(self, z) -> float:
        """Largest constraint violation at z (0 when strictly inside)."""
        z = _as_vector(z, self.n, "z")
        worst = 0.0
        if self.m_ineq:
            worst = max(worst, float(np.max(self.A_ineq @ z - self.b_ineq)))
        if self.m_eq:
            worst = max(worst, float(np.max(np.abs(self.A_eq @ z - self.b_eq))))
        return worst

    def contains(self, z, tol: float = DEFAULT_TOL) -> bool:
        return self.max_violation(z) <= tol

    @staticmethod
    def nonneg_orthant(n: int) -> "Polyhedron":
        return Polyhedron(n, A_ineq=-np.eye(n), b_ineq=np.zeros(n))

    @staticmethod
    def box(lower, upper) -> "Polyhedron":
        lower = np.asarray(lower, float).ravel()
        upper = np.asarray(upper, float).ravel()
        n = lower.size
        eye = np.eye(n)
        return Polyhedron(n, A_ineq=np.vstack([eye, -eye]),
                          b_ineq=np.concatenate([upper, -lower]))

    @staticmethod
    def standard_simplex(n: int) -> "Polyhedron":
        return Polyhedron(n, A_ineq=-np.eye(n), b_ineq=np.zeros(n),
                          A_eq=np.ones((1, n)), b_eq=np.ones(1))


# ---------------------------------------------------------------------------
# Generator representation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Generator form conv(points) + cone(rays) + span(lines).

    The set is empty exactly when ``points`` is empty.  Zero rays and
    zero lines are dropped at construction: they contribute nothing and
    a zero ray would let relative-interior tests pad coefficients for
    free.  Zero *points* are kept; conv({0, p}) genuinely differs from
    conv({p}).
    """

    n: int
    points: np.ndarray = None
    rays: np.ndarray = None
    lines: np.ndarray = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DimensionMismatch(f"n must be a positive integer, got {self.n!r}")
        points = _as_matrix(self.points, self.n, "points")
        rays = _as_matrix(self.rays, self.n, "rays")
        lines = _as_matrix(self.lines, self.n, "lines")
        rays = rays[np.any(rays != 0.0, axis=1)] if rays.size else rays
        lines = lines[np.any(lines != 0.0, axis=1)] if lines.size else lines
        for name, val in (("points", points), ("rays", rays), ("lines", lines)):
            object.__setattr__(self, name, val)
            val.setflags(write=False)

    @property
    def is_empty(self) -> bool:
        return self.points.shape[0] == 0

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_rays(self) -> int:
        return self.rays.shape[0]

    @property
    def n_lines(self) -> int:
        return self.lines.shape[0]

    def generator_matrix(self) -> np.ndarray:
        """Columns are all generators in order: points, rays, lines."""
        return np.vstack([self.points, self.rays, self.lines]).T

    def combine(self, coeffs) -> np.ndarray:
        """Evaluate the combination given stacked (lam, mu, nu) coefficients."""
        coeffs = _as_vector(coeffs, self.n_points + self.n_rays + self.n_lines,
                            "coeffs")
        return self.generator_matrix() @ coeffs

    def translate(self, v) -> "GeneratorSet":
        v = _as_vector(v, self.n, "v")
        return GeneratorSet(self.n, self.points + v, self.rays, self.lines)


# ---------------------------------------------------------------------------
# Linear programming: dense two-phase simplex, Bland's rule
# ---------------------------------------------------------------------------


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPOutcome:
    """Result of a maximization LP.

    value is the extended-real optimum: -inf when infeasible, +inf when
    unbounded.  witness is an optimal point (present iff OPTIMAL).
    dual_value is reconstructed from the final basis so callers can
    check the duality gap.
    """

    status: LPStatus
    value: float
    witness: np.ndarray | None = None
    dual_value: float | None = None

    @property
    def duality_gap(self) -> float | None:
        if self.dual_value is None:
            return None
        return abs(self.value - self.dual_value)


def _pivot(T: np.ndarray, basis: list, row: int, col: int) -> None:
    T[row] = T[row] / T[row, col]
    column = T[:, col].copy()
    column[row] = 0.0
    T -= np.outer(column, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col
    # damp roundoff in the rhs so later ratio tests stay well posed
    rhs = T[:, -1]
    rhs[(rhs < 0.0) & (rhs > -1e-11)] = 0.0


def _run_simplex(T: np.ndarray, basis: list, cost: np.ndarray,
                 tol: float, max_iter: int) -> str:
    """Minimize cost @ x on the canonical tableau in place.

    Bland's rule both for entering (smallest index with negative reduced
    cost) and leaving (smallest basic variable index among ratio ties),
    which rules out cycling.
    """
    m, width = T.shape
    ncols = width - 1
    reduced = cost.astype(float).copy()
    for p in range(m):
        j = basis[p]
        if reduced[j] != 0.0:
            reduced -= reduced[j] * T[p, :ncols]
    for _ in range(max_iter):
        negative = np.nonzero(reduced < -tol)[0]
        if negative.size == 0:
            return "optimal"
        enter = int(negative[0])
        col = T[:, enter]
        positive = col > tol
        if not positive.any():
            return "unbounded"
        ratios = np.full(m, _INF)
        ratios[positive] = T[positive, -1] / col[positive]
        best = float(ratios.min())
        ties = np.nonzero(ratios <= best + 1e-9 * (1.0 + abs(best)))[0]
        leave = int(min(ties, key=lambda p: basis[p]))
        _pivot(T, basis, leave, enter)
        ent = reduced[enter]
        if ent != 0.0:
            reduced -= ent * T[leave, :ncols]
            reduced[enter] = 0.0
    raise NumericalFailure("simplex iteration budget exceeded")


def lp_solve(c, lower=None, upper=None, A_eq=None, b_eq=None,
             A_ineq=None, b_ineq=None, *, tol: float = DEFAULT_TOL,
             max_iter: int | None = None) -> LPOutcome:
    """Maximize <c, z> over bounds and linear rows.

    lower/upper are per-variable bounds and may contain -inf/+inf (the
    default is fully free).  Returns an LPOutcome; the witness is the
    deterministic optimal vertex selected by Bland's rule.
    """
    c = np.asarray(c, dtype=float).ravel()
    n = c.size
    if n == 0 or not np.all(np.isfinite(c)):
        raise DimensionMismatch("objective must be a nonempty finite vector")
    lower = (np.full(n, -_INF) if lower is None
             else _as_vector(lower, n, "lower", allow_inf=True))
    upper = (np.full(n, _INF) if upper is None
             else _as_vector(upper, n, "upper", allow_inf=True))
    A_eq = _as_matrix(A_eq, n, "A_eq")
    b_eq = _as_vector(b_eq, A_eq.shape[0], "b_eq")
    A_ineq = _as_matrix(A_ineq, n, "A_ineq")
    b_ineq = _as_vector(b_ineq, A_ineq.shape[0], "b_ineq")
    if np.any(lower > upper):
        return LPOutcome(LPStatus.INFEASIBLE, -_INF)

    # Substitute every variable by a nonnegative one:
    #   finite lower  -> z = l + x
    #   upper only    -> z = u - x
    #   free          -> z = x_plus - x_minus
    # A finite upper bound on a lower-bounded variable becomes an extra
    # inequality row in the original coordinates.
    cols = []          # (original index, sign) per standard-form column
    z0 = np.zeros(n)
    extra_rows = []
    extra_b = []
    for i in range(n):
        lo, hi = lower[i], upper[i]
        if np.isfinite(lo):
            z0[i] = lo
            cols.append((i, 1.0))
            if np.isfinite(hi):
                row = np.zeros(n)
                row[i] = 1.0
                extra_rows.append(row)
                extra_b.append(hi)
        elif np.isfinite(hi):
            z0[i] = hi
            cols.append((i, -1.0))
        else:
            cols.append((i, 1.0))
            cols.append((i, -1.0))
    K = len(cols)
    M = np.zeros((n, K))
    for j, (i, sign) in enumerate(cols):
        M[i, j] = sign

    A_in_all = np.vstack([A_ineq] + [r.reshape(1, -1) for r in extra_rows]) \
        if extra_rows else A_ineq
    b_in_all = np.concatenate([b_ineq, np.asarray(extra_b, float)]) \
        if extra_b else b_ineq

    m_eq, m_in = A_eq.shape[0], A_in_all.shape[0]
    n_slack = m_in
    N = K + n_slack
    A_std = np.zeros((m_eq + m_in, N))
    A_std[:m_eq, :K] = A_eq @ M
    A_std[m_eq:, :K] = A_in_all @ M
    if n_slack:
        A_std[m_eq:, K:] = np.eye(n_slack)
    b_std = np.concatenate([b_eq - A_eq @ z0, b_in_all - A_in_all @ z0])

    flip = b_std < 0.0
    A_std[flip] *= -1.0
    b_std[flip] *= -1.0
    m = A_std.shape[0]

    scale = 1.0 + (float(np.max(np.abs(b_std))) if m else 0.0)
    pivot_tol = 1e-10
    budget = max_iter if max_iter is not None else 2000 + 50 * (m + N)

    # Phase 1: artificial variables on every row.
    if m:
        T = np.zeros((m, N + m + 1))
        T[:, :N] = A_std
        T[:, N:N + m] = np.eye(m)
        T[:, -1] = b_std
        basis = list(range(N, N + m))
        cost1 = np.concatenate([np.zeros(N), np.ones(m)])
        status = _run_simplex(T, basis, cost1, pivot_tol, budget)
        if status != "optimal":
            raise NumericalFailure("phase-1 simplex reported unbounded")
        infeas = sum(T[p, -1] for p in range(m) if basis[p] >= N)
        if infeas > tol * scale:
            return LPOutcome(LPStatus.INFEASIBLE, -_INF)
        # Drive artificials out of the basis; rows that resist are redundant.
        keep = np.ones(m, dtype=bool)
        for p in range(m):
            if basis[p] < N:
                continue
            pivots = np.nonzero(np.abs(T[p, :N]) > 1e-9)[0]
            if pivots.size:
                _pivot(T, basis, p, int(pivots[0]))
            else:
                keep[p] = False
        if not keep.all():
            T = T[keep]
            basis = [b for b, k in zip(basis, keep) if k]
            A_std = A_std[keep]
            b_std = b_std[keep]
            m = A_std.shape[0]
        T = np.hstack([T[:, :N], T[:, -1:]])
    else:
        T = np.zeros((0, N + 1))
        basis = []

    cost2 = np.concatenate([-(M.T @ c), np.zeros(n_slack)])
    status = _run_simplex(T, basis, cost2, pivot_tol, budget)
    if status == "unbounded":
        return LPOutcome(LPStatus.UNBOUNDED, _INF)

    x_std = np.zeros(N)
    for p in range(m):
        x_std[basis[p]] = T[p, -1]
    z = M @ x_std[:K] + z0
    value = float(c @ z)

    # Dual reconstruction from the final basis certifies the optimum.
    if m:
        B = A_std[:, basis]
        y, *_ = np.linalg.lstsq(B.T, cost2[np.asarray(basis, int)], rcond=None)
        dual_std = float(b_std @ y)
    else:
        dual_std = 0.0
    dual_value = float(c @ z0) - dual_std
    if abs(value - dual_value) > 1e-6 * (1.0 + abs(value)):
        raise NumericalFailure(
            f"duality gap {abs(value - dual_value):.3e} out of tolerance")

    worst = 0.0
    if A_ineq.shape[0]:
        worst = max(worst, float(np.max(A_ineq @ z - b_ineq)))
    if A_eq.shape[0]:
        worst = max(worst, float(np.max(np.abs(A_eq @ z - b_eq))))
    finite_lo = np.isfinite(lower)
    finite_hi = np.isfinite(upper)
    if finite_lo.any():
        worst = max(worst, float(np.max(lower[finite_lo] - z[finite_lo])))
    if finite_hi.any():
        worst = max(worst, float(np.max(z[finite_hi] - upper[finite_hi])))
    if worst > 1e-7 * scale:
        raise NumericalFailure(f"optimal witness infeasible by {worst:.3e}")

    return LPOutcome(LPStatus.OPTIMAL, value, z, dual_value)


# ---------------------------------------------------------------------------
# Quadratic programming: primal active-set method
# ---------------------------------------------------------------------------


def _qp_active_set(H, c, A_eq, b_eq, A_ineq, b_ineq, x0, *,
                   tol: float = 1e-10, max_iter: int | None = None) -> np.ndarray:
    """Minimize 0.5 x'Hx + c'x with H PSD from a feasible start.

    Equality rows stay in every working set; inequality rows enter and
    leave it.  Subproblems are solved by least squares on the KKT
    system, which is always consistent because the objective is bounded
    below on every affine subset (H is a Gram-type matrix in all callers
    or the identity).
    """
    n = c.size
    x = np.asarray(x0, dtype=float).copy()
    m_eq = A_eq.shape[0]
    m_in = A_ineq.shape[0]
    slack0 = b_ineq - A_ineq @ x if m_in else np.zeros(0)
    if (m_in and slack0.min() < -1e-7) or \
       (m_eq and np.max(np.abs(A_eq @ x - b_eq)) > 1e-7):
        raise NumericalFailure("active-set QP needs a feasible start")
    working = sorted(np.nonzero(slack0 <= 1e-11)[0].tolist()) if m_in else []
    scale = 1.0 + float(np.max(np.abs(c))) if c.size else 1.0
    budget = max_iter if max_iter is not None else 100 + 20 * (n + m_in)

    for _ in range(budget):
        act = np.vstack([A_eq, A_ineq[working]]) if (m_eq or working) \
            else np.zeros((0, n))
        b_act = np.concatenate([b_eq, b_ineq[working]]) if (m_eq or working) \
            else np.zeros(0)
        k = act.shape[0]
        kkt = np.zeros((n + k, n + k))
        kkt[:n, :n] = H
        kkt[:n, n:] = act.T
        kkt[n:, :n] = act
        rhs = np.concatenate([-c, b_act])
        sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        target = sol[:n]
        direction = target - x
        if np.max(np.abs(direction), initial=0.0) <= 1e-11 * (1.0 + np.max(np.abs(x), initial=0.0)):
            if not working:
                return target
            eta = sol[n + m_eq:]
            violated = [j for j, mult in enumerate(eta)
                        if mult < -1e-9 * scale]
            if not violated:
                return target
            working.pop(min(violated))
            continue
        # longest feasible step toward the subproblem solution
        alpha = 1.0
        blocking = -1
        for i in range(m_in):
            if i in working:
                continue
            advance = float(A_ineq[i] @ direction)
            if advance <= 1e-13 * (1.0 + np.max(np.abs(A_ineq[i]))):
                continue
            room = float(b_ineq[i] - A_ineq[i] @ x)
            step = max(room, 0.0) / advance
            if step < alpha - 1e-13:
                alpha = step
                blocking = i
        if blocking < 0:
            x = target
        else:
            x = x + alpha * direction
            working = sorted(working + [blocking])
    raise NumericalFailure("active-set QP iteration budget exceeded")


def _min_norm_coefficients(S: GeneratorSet, shift: np.ndarray,
                           weights: np.ndarray) -> np.ndarray:
    """Coefficients (lam, mu, nu) minimizing ||weights*(shift + combo)||.

    Warm start: the equality-constrained least-squares minimizer is
    accepted outright whenever it already satisfies the sign
    constraints; otherwise the active-set method runs from the uniform
    convex combination.
    """
    G = S.generator_matrix()
    n_pts, n_rays, n_lin = S.n_points, S.n_rays, S.n_lines
    K = n_pts + n_rays + n_lin
    WG = G * weights[:, None]
    H = WG.T @ WG
    c = WG.T @ (weights * shift)
    A_eq = np.zeros((1, K))
    A_eq[0, :n_pts] = 1.0
    b_eq = np.ones(1)

    kkt = np.zeros((K + 1, K + 1))
    kkt[:K, :K] = H
    kkt[:K, K:] = A_eq.T
    kkt[K:, :K] = A_eq
    rhs = np.concatenate([-c, b_eq])
    analytic, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
    theta = analytic[:K]
    signed = theta[:n_pts + n_rays]
    if signed.size == 0 or signed.min() >= -1e-12:
        theta = theta.copy()
        theta[:n_pts + n_rays] = np.maximum(theta[:n_pts + n_rays], 0.0)
        return theta

    n_signed = n_pts + n_rays
    A_in = np.zeros((n_signed, K))
    A_in[:, :n_signed] = -np.eye(n_signed)[:, :n_signed]
    b_in = np.zeros(n_signed)
    start = np.zeros(K)
    start[:n_pts] = 1.0 / n_pts
    theta = _qp_active_set(H, c, A_eq, b_eq, A_in, b_in, start)
    theta[:n_signed] = np.maximum(theta[:n_signed], 0.0)
    return theta


def min_norm_weighted(S: GeneratorSet, shift, weights, *,
                      tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """Minimize ||weights o (shift + z)|| over z in S.

    Returns (value, minimizer).  Coordinates with weight zero do not
    affect the value.  Raises EmptySet when S has no points.
    """
    if S.is_empty:
        raise EmptySet("min_norm_weighted needs a nonempty generator set")
    shift = _as_vector(shift, S.n, "shift")
    weights = _as_vector(weights, S.n, "weights")
    theta = _min_norm_coefficients(S, shift, weights)
    z = S.combine(theta)
    value = float(np.linalg.norm(weights * (shift + z)))
    return value, z


def vrep_membership(S: GeneratorSet, z, tol: float = DEFAULT_TOL) -> bool:
    """True iff dist(z, S) <= tol."""
    if S.is_empty:
        raise EmptySet("membership query on an empty generator set")
    z = _as_vector(z, S.n, "z")
    value, _ = min_norm_weighted(S, -z, np.ones(S.n))
    return value <= tol


def vrep_ri_membership(S: GeneratorSet, z, *, tol: float = DEFAULT_TOL) -> bool:
    """True iff z lies in the relative interior of S.

    Decided by the LP  max t  s.t.  z is a generator combination whose
    point and ray coefficients all stay >= t.  For a finite generator
    list (redundant generators included) the relative interior is
    exactly the set of combinations with strictly positive coefficients
    on every listed point and ray, so ri membership is optimal t > 0;
    the threshold used is ``tol``.
    """
    if S.is_empty:
        raise EmptySet("relative-interior query on an empty generator set")
    z = _as_vector(z, S.n, "z")
    n_pts, n_rays, n_lin = S.n_points, S.n_rays, S.n_lines
    K = n_pts + n_rays + n_lin
    G = S.generator_matrix()

    nvar = K + 1                       # coefficients plus t
    c = np.zeros(nvar)
    c[-1] = 1.0
    lower = np.concatenate([np.zeros(n_pts + n_rays),
                            np.full(n_lin + 1, -_INF)])
    A_eq = np.zeros((S.n + 1, nvar))
    A_eq[:S.n, :K] = G
    A_eq[S.n, :n_pts] = 1.0
    b_eq = np.concatenate([z, [1.0]])
    n_bounded = n_pts + n_rays
    A_in = np.zeros((n_bounded, nvar))
    A_in[:, -1] = 1.0
    A_in[:, :n_bounded] -= np.eye(n_bounded)
    b_in = np.zeros(n_bounded)

    out = lp_solve(c, lower, None, A_eq, b_eq, A_in, b_in)
    if out.status is LPStatus.INFEASIBLE:
        return False
    if out.status is LPStatus.UNBOUNDED:
        raise NumericalFailure("relative-interior LP cannot be unbounded")
    return out.value > tol


def vrep_support(S: GeneratorSet, w) -> float:
    """Support value sup{<w, s> : s in S}; +inf on escaping directions."""
    if S.is_empty:
        raise EmptySet("support query on an empty generator set")
    w = _as_vector(w, S.n, "w")
    w_norm = float(np.linalg.norm(w))
    for r in S.rays:
        if float(r @ w) > 1e-10 * (1.0 + np.linalg.norm(r) * w_norm):
            return _INF
    for l in S.lines:
        if abs(float(l @ w)) > 1e-10 * (1.0 + np.linalg.norm(l) * w_norm):
            return _INF
    return float(np.max(S.points @ w))


def feasible_point(P: Polyhedron) -> np.ndarray:
    """Any feasible point of P; raises InfeasiblePolyhedron when empty."""
    out = lp_solve(np.zeros(P.n), None, None, P.A_eq, P.b_eq,
                   P.A_ineq, P.b_ineq)
    if out.status is not LPStatus.OPTIMAL:
        raise InfeasiblePolyhedron("polyhedron has no feasible point")
    return out.witness


def project_onto_polyhedron(P: Polyhedron, x, *, tol: float = DEFAULT_TOL,
                            start=None) -> np.ndarray:
    """Euclidean projection of x onto P.

    ``start`` may supply a known feasible point to skip the feasibility
    LP (useful when projecting many perturbations of one point).
    """
    x = _as_vector(x, P.n, "x")
    if start is None:
        z0 = feasible_point(P)
    else:
        z0 = _as_vector(start, P.n, "start")
        if P.max_violation(z0) > 1e-9:
            z0 = feasible_point(P)
    z = _qp_active_set(np.eye(P.n), -x, P.A_eq, P.b_eq, P.A_ineq, P.b_ineq, z0)
    return z

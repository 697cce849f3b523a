"""Composite problems phi(x) = f(x) + g(x) with polyhedral g.

g is a finite max of affine pieces plus the indicator of a polyhedral
domain that always lives inside the nonnegative orthant: the constructor
appends the rows -x_i <= 0 (deduplicated against user rows) so the
orthant geometry is explicit in every normal cone.  f is smooth; the
serialized format is a quadratic but any object with value/grad/hess
methods works.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InfeasiblePolyhedron, OutOfDomain
from .polyhedra import (
    DEFAULT_TOL,
    GeneratorSet,
    Polyhedron,
    feasible_point,
    min_norm_weighted,
    _as_matrix,
    _as_vector,
)

DEFAULT_TOL_ACTIVE = 1e-8

_INF = float("inf")


@dataclass(frozen=True, eq=False)
class SmoothQuadratic:
    """f(x) = 0.5 x'Qx + q'x + r with Q symmetrized at construction."""

    Q: np.ndarray
    q: np.ndarray
    r: float = 0.0

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise DimensionMismatch(f"Q must be square, got shape {Q.shape}")
        if not np.all(np.isfinite(Q)):
            raise DimensionMismatch("Q must be finite")
        Q = 0.5 * (Q + Q.T)
        q = _as_vector(self.q, Q.shape[0], "q")
        if not np.isfinite(self.r):
            raise DimensionMismatch("r must be finite")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", float(self.r))
        Q.setflags(write=False)
        q.setflags(write=False)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def value(self, x) -> float:
        x = _as_vector(x, self.n, "x")
        return float(0.5 * x @ self.Q @ x + self.q @ x + self.r)

    def grad(self, x) -> np.ndarray:
        x = _as_vector(x, self.n, "x")
        return self.Q @ x + self.q

    def hess(self, x) -> np.ndarray:
        _as_vector(x, self.n, "x")
        return self.Q


def _dedup_against_orthant_rows(A: np.ndarray, b: np.ndarray, n: int):
    """Indices i whose row -e_i <= 0 is already present (up to positive
    scaling) among the user rows."""
    present = set()
    for row, rhs in zip(A, b):
        nz = np.nonzero(row)[0]
        if nz.size != 1 or rhs != 0.0 or row[nz[0]] >= 0.0:
            continue
        present.add(int(nz[0]))
    return present


@dataclass(frozen=True, eq=False)
class PolyhedralFunction:
    """g(x) = max_j (<a_j, x> + b_j) + indicator(domain).

    An empty piece list means the plain indicator (value 0 on the
    domain).  The stored domain is the user polyhedron intersected with
    the nonnegative orthant; construction fails on an empty domain.
    """

    n: int
    pieces_A: np.ndarray = None
    pieces_b: np.ndarray = None
    domain: Polyhedron = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DimensionMismatch(f"n must be a positive integer, got {self.n!r}")
        A = _as_matrix(self.pieces_A, self.n, "pieces_A")
        b = _as_vector(self.pieces_b, A.shape[0], "pieces_b")
        dom = self.domain if self.domain is not None else Polyhedron(self.n)
        if dom.n != self.n:
            raise DimensionMismatch("domain dimension does not match n")
        present = _dedup_against_orthant_rows(dom.A_ineq, dom.b_ineq, self.n)
        missing = [i for i in range(self.n) if i not in present]
        if missing:
            extra = np.zeros((len(missing), self.n))
            for k, i in enumerate(missing):
                extra[k, i] = -1.0
            dom = Polyhedron(self.n,
                             A_ineq=np.vstack([dom.A_ineq, extra]),
                             b_ineq=np.concatenate([dom.b_ineq,
                                                    np.zeros(len(missing))]),
                             A_eq=dom.A_eq, b_eq=dom.b_eq)
        feasible_point(dom)          # raises InfeasiblePolyhedron when empty
        object.__setattr__(self, "pieces_A", A)
        object.__setattr__(self, "pieces_b", b)
        object.__setattr__(self, "domain", dom)
        A.setflags(write=False)
        b.setflags(write=False)

    @property
    def n_pieces(self) -> int:
        return self.pieces_A.shape[0]

    @staticmethod
    def indicator(domain: Polyhedron) -> "PolyhedralFunction":
        return PolyhedralFunction(domain.n, domain=domain)

    @staticmethod
    def orthant_indicator(n: int) -> "PolyhedralFunction":
        return PolyhedralFunction.indicator(Polyhedron.nonneg_orthant(n))

    @staticmethod
    def simplex_indicator(n: int) -> "PolyhedralFunction":
        return PolyhedralFunction.indicator(Polyhedron.standard_simplex(n))

    @staticmethod
    def max_of_pieces(pieces, domain: Polyhedron) -> "PolyhedralFunction":
        """pieces is a sequence of (a, b) affine pairs."""
        A = np.array([np.asarray(a, float).ravel() for a, _ in pieces])
        b = np.array([float(bb) for _, bb in pieces])
        return PolyhedralFunction(domain.n, A, b, domain)


def is_orthant_indicator(g: PolyhedralFunction) -> bool:
    """True when g is the plain indicator of the nonnegative orthant.

    Syntactic check: no pieces, no equality rows, and every inequality
    row a positive multiple of some -e_i with zero right-hand side.
    """
    if g.n_pieces or g.domain.m_eq:
        return False
    for row, rhs in zip(g.domain.A_ineq, g.domain.b_ineq):
        nz = np.nonzero(row)[0]
        if nz.size != 1 or rhs != 0.0 or row[nz[0]] >= 0.0:
            return False
    return True


def is_simplex_indicator(g: PolyhedralFunction) -> bool:
    """True when g is the indicator of {x >= 0, sum x = c} for some c > 0."""
    if g.n_pieces or g.domain.m_eq != 1:
        return False
    row = g.domain.A_eq[0]
    rhs = g.domain.b_eq[0]
    if row[0] == 0.0 or not np.allclose(row, row[0]):
        return False
    if rhs / row[0] <= 0.0:
        return False
    for irow, irhs in zip(g.domain.A_ineq, g.domain.b_ineq):
        nz = np.nonzero(irow)[0]
        if nz.size != 1 or irhs != 0.0 or irow[nz[0]] >= 0.0:
            return False
    return True


def g_eval(g: PolyhedralFunction, x, tol: float = DEFAULT_TOL) -> float:
    """Extended-real value of g at x (+inf outside the domain)."""
    x = _as_vector(x, g.n, "x")
    if not g.domain.contains(x, tol):
        return _INF
    if g.n_pieces == 0:
        return 0.0
    return float(np.max(g.pieces_A @ x + g.pieces_b))


@dataclass(frozen=True)
class ActivityPattern:
    """Which pieces and inequality rows are active at a point.

    degenerate is set when some activity gap lands in the band
    (tol_active, 10 * tol_active]: the pattern would change under a
    slightly looser threshold, so downstream certificates deserve
    suspicion.
    """

    active_pieces: tuple
    active_rows: tuple
    degenerate: bool


def activity_pattern(g: PolyhedralFunction, x,
                     tol_active: float = DEFAULT_TOL_ACTIVE) -> ActivityPattern:
    x = _as_vector(x, g.n, "x")
    degenerate = False
    active_pieces = []
    if g.n_pieces:
        vals = g.pieces_A @ x + g.pieces_b
        gaps = float(np.max(vals)) - vals
        active_pieces = np.nonzero(gaps <= tol_active)[0].tolist()
        degenerate |= bool(np.any((gaps > tol_active)
                                  & (gaps <= 10.0 * tol_active)))
    slacks = g.domain.b_ineq - g.domain.A_ineq @ x
    active_rows = np.nonzero(slacks <= tol_active)[0].tolist()
    degenerate |= bool(np.any((slacks > tol_active)
                              & (slacks <= 10.0 * tol_active)))
    return ActivityPattern(tuple(active_pieces), tuple(active_rows),
                           degenerate)


def g_subdiff(g: PolyhedralFunction, x, tol_active: float = DEFAULT_TOL_ACTIVE,
              tol: float = DEFAULT_TOL) -> GeneratorSet:
    """Subdifferential of g at x as a generator set.

    conv(active piece gradients) + cone(active inequality normals)
    + span(equality normals).  When the piece list is empty the single
    point is the origin.  Exact when x is exactly feasible and the
    activity pattern is exact.
    """
    x = _as_vector(x, g.n, "x")
    if not g.domain.contains(x, tol):
        raise OutOfDomain("g_subdiff: point outside the domain")
    pattern = activity_pattern(g, x, tol_active)
    if g.n_pieces:
        points = g.pieces_A[list(pattern.active_pieces)]
    else:
        points = np.zeros((1, g.n))
    rays = g.domain.A_ineq[list(pattern.active_rows)] \
        if pattern.active_rows else np.zeros((0, g.n))
    lines = g.domain.A_eq
    return GeneratorSet(g.n, points, rays, lines)


@dataclass(frozen=True, eq=False)
class CompositeProblem:
    """phi(x) = f(x) + g(x); f needs value/grad/hess, g is polyhedral."""

    f: object
    g: PolyhedralFunction

    def __post_init__(self):
        for attr in ("value", "grad", "hess"):
            if not callable(getattr(self.f, attr, None)):
                raise DimensionMismatch(f"f must provide a callable {attr}()")
        fn = getattr(self.f, "n", None)
        if fn is not None and fn != self.g.n:
            raise DimensionMismatch(
                f"f dimension {fn} does not match g dimension {self.g.n}")

    @property
    def n(self) -> int:
        return self.g.n


def phi_value(p: CompositeProblem, x, tol: float = DEFAULT_TOL) -> float:
    gx = g_eval(p.g, x, tol)
    if not np.isfinite(gx):
        return _INF
    return float(p.f.value(x)) + gx


def phi_subdiff(p: CompositeProblem, x,
                tol_active: float = DEFAULT_TOL_ACTIVE,
                tol: float = DEFAULT_TOL) -> GeneratorSet:
    """Subdifferential of phi at x: grad f translates the points of
    the g subdifferential, rays and lines are unchanged."""
    S = g_subdiff(p.g, x, tol_active, tol)
    return S.translate(p.f.grad(x))


def phi_residual(p: CompositeProblem, x,
                 tol_active: float = DEFAULT_TOL_ACTIVE,
                 tol: float = DEFAULT_TOL) -> float:
    """dist(0, subdiff phi(x)); raises OutOfDomain outside dom g."""
    x = _as_vector(x, p.n, "x")
    S = g_subdiff(p.g, x, tol_active, tol)
    value, _ = min_norm_weighted(S, p.f.grad(x), np.ones(p.n))
    return value

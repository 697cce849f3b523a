"""Squared-variable lifting Phi(y) = f(y*y) + g(y*y).

Squaring the variables turns a problem that is nonnegative by
constraint into one that is nonnegative by construction.  The price is
spurious first-order points: y = 0 always kills the gradient of the
smooth part, whether or not x = 0 means anything for the original
problem.  The residual computed here quantifies lifted stationarity
exactly:

    dist(0, subdiff Phi(y)) = 2 * min { ||y o (grad f(y*y) + z)|| :
                                        z in subdiff g(y*y) }

so the right-hand side is a weighted minimum-norm problem over the
polyhedral subdifferential, with weights |y|.  Coordinates where y
vanishes are free of charge, which is exactly how spurious points
arise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfLiftedDomain
from .polyfunc import (
    DEFAULT_TOL_ACTIVE,
    CompositeProblem,
    activity_pattern,
    g_eval,
    g_subdiff,
    phi_residual,
)
from .polyhedra import DEFAULT_TOL, min_norm_weighted, _as_vector

DEFAULT_TOL_SUPPORT = 1e-8

_INF = float("inf")


def support_set(y, tol_support: float = DEFAULT_TOL_SUPPORT):
    """Indices with |y_i| > tol_support and their complement.

    The threshold is strict: a coordinate exactly at tol_support counts
    as off-support.  Near-threshold magnitudes make every downstream
    certificate fragile; reports carry min |y_i| over the support so
    callers can see how much margin they have.
    """
    y = np.asarray(y, dtype=float).ravel()
    mask = np.abs(y) > tol_support
    idx = np.arange(y.size)
    return idx[mask], idx[~mask]


@dataclass(frozen=True, eq=False)
class LiftedPoint:
    """A candidate y with its squared point and support."""

    y: np.ndarray
    x: np.ndarray
    support: tuple
    in_domain: bool


def lift_point(p: CompositeProblem, y,
               tol_support: float = DEFAULT_TOL_SUPPORT,
               tol: float = DEFAULT_TOL) -> LiftedPoint:
    y = _as_vector(y, p.n, "y")
    x = y * y
    sup, _ = support_set(y, tol_support)
    return LiftedPoint(y, x, tuple(int(i) for i in sup),
                       p.g.domain.contains(x, tol))


def lift_eval(p: CompositeProblem, y, tol: float = DEFAULT_TOL) -> float:
    """Phi(y) = f(y*y) + g(y*y), +inf when y*y leaves the domain of g."""
    y = _as_vector(y, p.n, "y")
    x = y * y
    gx = g_eval(p.g, x, tol)
    if not np.isfinite(gx):
        return _INF
    return float(p.f.value(x)) + gx


def lifted_residual(p: CompositeProblem, y,
                    tol_support: float = DEFAULT_TOL_SUPPORT,
                    tol: float = DEFAULT_TOL) -> float:
    """dist(0, subdiff Phi(y)) via the weighted minimum-norm identity."""
    y = _as_vector(y, p.n, "y")
    x = y * y
    if not p.g.domain.contains(x, tol):
        raise OutOfLiftedDomain("y*y is outside the domain of g")
    S = g_subdiff(p.g, x, tol=tol)
    value, _ = min_norm_weighted(S, p.f.grad(x), np.abs(y))
    return 2.0 * value


@dataclass(frozen=True)
class StationarityReport:
    """First-order classification of a lifted candidate y.

    stationary_for_Phi tracks the lifted residual; stationary_for_phi
    tracks the original residual at x = y*y.  A spurious candidate is
    stationary for Phi but not for phi.  min_support_abs is the margin
    min |y_i| over the support (None when the support is empty); when
    it is close to tol_support the classification is fragile.
    """

    in_domain: bool
    support: tuple
    lifted_residual: float | None
    phi_residual: float | None
    stationary_for_Phi: bool
    stationary_for_phi: bool
    min_support_abs: float | None
    degenerate_activity: bool


def classify_first_order(p: CompositeProblem, y, tol: float = DEFAULT_TOL,
                         tol_support: float = DEFAULT_TOL_SUPPORT
                         ) -> StationarityReport:
    """Classify y; out-of-domain points are reported, not raised."""
    y = _as_vector(y, p.n, "y")
    point = lift_point(p, y, tol_support, tol)
    if not point.in_domain:
        return StationarityReport(False, point.support, None, None,
                                  False, False, None, False)
    res_Phi = lifted_residual(p, y, tol_support, tol)
    res_phi = phi_residual(p, point.x, tol=tol)
    pattern = activity_pattern(p.g, point.x, DEFAULT_TOL_ACTIVE)
    min_abs = (float(np.min(np.abs(y[list(point.support)])))
               if point.support else None)
    return StationarityReport(
        True, point.support, res_Phi, res_phi,
        res_Phi <= tol, res_phi <= tol, min_abs, pattern.degenerate)

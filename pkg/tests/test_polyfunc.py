"""Unit tests for the composite problem data model and subdifferentials."""

import numpy as np
import pytest

import sqreparam as sq


def quad1(q=-1.0, r=0.5):
    # f(x) = x^2/2 + q x + r on the nonnegative half-line
    return sq.CompositeProblem(
        sq.SmoothQuadratic(np.eye(1), np.array([q]), r),
        sq.PolyhedralFunction.orthant_indicator(1))


def test_smooth_quadratic_value_grad_hess():
    Q = np.array([[2.0, 1.0], [0.0, 4.0]])
    f = sq.SmoothQuadratic(Q, np.array([0.5, -1.0]), 3.0)
    x = np.array([1.0, 2.0])
    sym = 0.5 * (Q + Q.T)
    assert f.value(x) == pytest.approx(0.5 * x @ sym @ x + np.array([0.5, -1.0]) @ x + 3.0)
    assert np.allclose(f.grad(x), sym @ x + [0.5, -1.0])
    assert np.allclose(f.hess(x), sym)


def test_smooth_quadratic_grad_matches_fd():
    rng = np.random.default_rng(7)
    Q = rng.standard_normal((3, 3))
    f = sq.SmoothQuadratic(Q, rng.standard_normal(3), 0.7)
    x = rng.standard_normal(3)
    t = 1e-6
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        fd = (f.value(x + t * e) - f.value(x - t * e)) / (2 * t)
        assert fd == pytest.approx(f.grad(x)[i], abs=1e-6)


def test_orthant_indicator_rows():
    g = sq.PolyhedralFunction.orthant_indicator(3)
    assert g.n_pieces == 0
    assert g.domain.m_ineq == 3
    assert g.domain.m_eq == 0


def test_domain_nonnegativity_rows_deduped():
    # a domain that already carries -x_i <= 0 rows must not get duplicates
    P = sq.Polyhedron(2, A_ineq=np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]]),
                      b_ineq=np.array([0.0, 0.0, 2.0]))
    g = sq.PolyhedralFunction(2, domain=P)
    assert g.domain.m_ineq == 3


def test_domain_nonnegativity_rows_appended():
    P = sq.Polyhedron(2, A_ineq=np.array([[1.0, 1.0]]), b_ineq=np.array([2.0]))
    g = sq.PolyhedralFunction(2, domain=P)
    assert g.domain.m_ineq == 3
    assert not g.domain.contains(np.array([-0.5, 0.5]))


def test_g_eval_max_of_pieces():
    g = sq.PolyhedralFunction(2, pieces_A=np.array([[1.0, 0.0], [0.0, 1.0]]),
                              pieces_b=np.array([0.0, 1.0]))
    assert sq.g_eval(g, np.array([3.0, 1.0])) == pytest.approx(3.0)
    assert sq.g_eval(g, np.array([0.5, 1.0])) == pytest.approx(2.0)
    assert sq.g_eval(g, np.array([-1.0, 0.0])) == np.inf


def test_g_eval_indicator():
    g = sq.PolyhedralFunction.simplex_indicator(2)
    assert sq.g_eval(g, np.array([0.5, 0.5])) == 0.0
    assert sq.g_eval(g, np.array([0.5, 0.6])) == np.inf


def test_g_subdiff_orthant_normal_cone():
    g = sq.PolyhedralFunction.orthant_indicator(2)
    S = sq.g_subdiff(g, np.array([1.0, 1.0]))
    assert S.n_points == 1 and S.n_rays == 0
    assert np.allclose(S.points, 0.0)
    S = sq.g_subdiff(g, np.array([0.0, 1.0]))
    assert S.n_rays == 1
    assert np.allclose(S.rays, [[-1.0, 0.0]])


def test_g_subdiff_out_of_domain():
    g = sq.PolyhedralFunction.orthant_indicator(1)
    with pytest.raises(sq.OutOfDomain):
        sq.g_subdiff(g, np.array([-1.0]))


def test_g_subdiff_piece_tie_is_hull():
    # max(x1, x2) at a tie point: subdifferential is conv{e1, e2}
    g = sq.PolyhedralFunction(2, pieces_A=np.array([[1.0, 0.0], [0.0, 1.0]]),
                              pieces_b=np.zeros(2))
    S = sq.g_subdiff(g, np.array([1.0, 1.0]))
    assert S.n_points == 2
    assert sq.vrep_membership(S, np.array([0.5, 0.5]))
    assert not sq.vrep_membership(S, np.array([1.0, 1.0]))


def test_activity_pattern_tie_and_degenerate_rows():
    g = sq.PolyhedralFunction(2, pieces_A=np.array([[1.0, 0.0], [0.0, 1.0]]),
                              pieces_b=np.zeros(2))
    ap = sq.activity_pattern(g, np.array([1.0, 1.0]))
    assert len(ap.active_pieces) == 2
    ap = sq.activity_pattern(g, np.array([2.0, 1.0]))
    assert tuple(ap.active_pieces) == (0,)


def test_phi_value_composite():
    p = quad1()
    assert sq.phi_value(p, np.array([1.0])) == pytest.approx(0.0)
    assert sq.phi_value(p, np.array([0.0])) == pytest.approx(0.5)
    assert sq.phi_value(p, np.array([-1.0])) == np.inf


def test_phi_residual_designed_values():
    p = quad1()
    assert sq.phi_residual(p, np.array([1.0])) == pytest.approx(0.0, abs=1e-12)
    # at x = 0 the subdifferential is (-inf, -1]; distance to 0 is 1
    assert sq.phi_residual(p, np.array([0.0])) == pytest.approx(1.0, abs=1e-9)


def test_phi_subdiff_shifts_by_gradient():
    p = quad1()
    S = sq.phi_subdiff(p, np.array([0.0]))
    assert sq.vrep_membership(S, np.array([-1.0]))
    assert sq.vrep_membership(S, np.array([-5.0]))
    assert not sq.vrep_membership(S, np.array([-0.5]))


def test_composite_problem_dimension_guard():
    f = sq.SmoothQuadratic(np.eye(2), np.zeros(2))
    g = sq.PolyhedralFunction.orthant_indicator(3)
    with pytest.raises(sq.DimensionMismatch):
        sq.CompositeProblem(f, g)

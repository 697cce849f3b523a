"""Unit tests for the polyhedral kernels: LP, projection, generator sets."""

import numpy as np
import pytest

import sqreparam as sq


def test_box_constructor_rows():
    P = sq.Polyhedron.box(np.zeros(2), np.array([1.0, 2.0]))
    assert P.n == 2
    assert P.m_ineq == 4
    assert P.m_eq == 0
    assert P.contains(np.array([0.5, 1.5]))
    assert not P.contains(np.array([0.5, 2.5]))


def test_max_violation_signs():
    P = sq.Polyhedron.box(np.zeros(1), np.ones(1))
    assert P.max_violation(np.array([0.5])) <= 0.0
    assert P.max_violation(np.array([1.5])) == pytest.approx(0.5)


def test_lp_solve_hand_case():
    # max x + y over the box [0,1] x [0,2]: optimum 3 at (1,2)
    P = sq.Polyhedron.box(np.zeros(2), np.array([1.0, 2.0]))
    out = sq.lp_solve(np.ones(2), A_ineq=P.A_ineq, b_ineq=P.b_ineq)
    assert out.status == sq.LPStatus.OPTIMAL
    assert out.value == pytest.approx(3.0, abs=1e-12)
    assert np.allclose(out.witness, [1.0, 2.0], atol=1e-12)


def test_lp_solve_bounds_form():
    out = sq.lp_solve(np.array([2.0, -1.0]), lower=np.array([-1.0, 0.0]),
                      upper=np.array([4.0, 5.0]))
    assert out.status == sq.LPStatus.OPTIMAL
    assert out.value == pytest.approx(8.0, abs=1e-12)
    assert np.allclose(out.witness, [4.0, 0.0], atol=1e-12)


def test_lp_solve_equality_row():
    # max x1 on the standard simplex: vertex e1
    out = sq.lp_solve(np.array([1.0, 0.0, 0.0]), lower=np.zeros(3),
                      A_eq=np.ones((1, 3)), b_eq=np.ones(1))
    assert out.status == sq.LPStatus.OPTIMAL
    assert out.value == pytest.approx(1.0, abs=1e-12)


def test_lp_solve_infeasible():
    out = sq.lp_solve(np.ones(1), A_ineq=np.array([[1.0], [-1.0]]),
                      b_ineq=np.array([0.0, -1.0]))
    assert out.status == sq.LPStatus.INFEASIBLE


def test_lp_solve_unbounded():
    out = sq.lp_solve(np.ones(1), A_ineq=np.array([[-1.0]]),
                      b_ineq=np.array([0.0]))
    assert out.status == sq.LPStatus.UNBOUNDED


def test_projection_hand_cases():
    box = sq.Polyhedron.box(np.zeros(2), np.ones(2))
    z = sq.project_onto_polyhedron(box, np.array([2.0, -1.0]))
    assert np.allclose(z, [1.0, 0.0], atol=1e-9)
    simp = sq.Polyhedron.standard_simplex(2)
    z = sq.project_onto_polyhedron(simp, np.array([1.0, 1.0]))
    assert np.allclose(z, [0.5, 0.5], atol=1e-9)


def test_projection_interior_point_fixed():
    box = sq.Polyhedron.box(np.zeros(2), np.ones(2))
    x = np.array([0.25, 0.75])
    assert np.allclose(sq.project_onto_polyhedron(box, x), x, atol=1e-12)


def test_projection_idempotent():
    simp = sq.Polyhedron.standard_simplex(3)
    rng = np.random.default_rng(4)
    for _ in range(10):
        z = sq.project_onto_polyhedron(simp, rng.standard_normal(3))
        z2 = sq.project_onto_polyhedron(simp, z)
        assert np.linalg.norm(z2 - z) <= 1e-9


def test_feasible_point_and_infeasibility():
    simp = sq.Polyhedron.standard_simplex(4)
    z = sq.feasible_point(simp)
    assert simp.contains(z)
    bad = sq.Polyhedron(1, A_ineq=np.array([[1.0], [-1.0]]),
                        b_ineq=np.array([0.0, -1.0]))
    with pytest.raises(sq.InfeasiblePolyhedron):
        sq.feasible_point(bad)
    with pytest.raises(sq.InfeasiblePolyhedron):
        sq.project_onto_polyhedron(bad, np.zeros(1))


def test_generator_set_drops_zero_rays_and_lines():
    S = sq.GeneratorSet(2, points=np.array([[1.0, 0.0]]),
                        rays=np.array([[0.0, 0.0], [0.0, 1.0]]),
                        lines=np.array([[0.0, 0.0]]))
    assert S.n_points == 1
    assert S.n_rays == 1
    assert S.n_lines == 0


def test_generator_set_keeps_zero_points():
    S = sq.GeneratorSet(1, points=np.array([[0.0]]))
    assert S.n_points == 1
    assert not S.is_empty


def test_generator_combine_and_translate():
    S = sq.GeneratorSet(2, points=np.array([[1.0, 0.0]]),
                        rays=np.array([[0.0, 1.0]]))
    assert np.allclose(S.combine(np.array([1.0, 3.0])), [1.0, 3.0])
    T = S.translate(np.array([1.0, 1.0]))
    assert np.allclose(T.points, [[2.0, 1.0]])
    assert np.allclose(T.rays, [[0.0, 1.0]])


def test_vrep_membership_segment():
    Seg = sq.GeneratorSet(1, points=np.array([[0.0], [2.0]]))
    assert sq.vrep_membership(Seg, np.array([1.0]))
    assert sq.vrep_membership(Seg, np.array([0.0]))
    assert sq.vrep_membership(Seg, np.array([2.0]))
    assert not sq.vrep_membership(Seg, np.array([2.1]))
    assert not sq.vrep_membership(Seg, np.array([-0.1]))


def test_vrep_membership_with_rays_and_lines():
    S = sq.GeneratorSet(2, points=np.array([[0.0, 0.0]]),
                        rays=np.array([[1.0, 0.0]]),
                        lines=np.array([[0.0, 1.0]]))
    assert sq.vrep_membership(S, np.array([3.0, -7.0]))
    assert not sq.vrep_membership(S, np.array([-0.5, 0.0]))


def test_vrep_ri_membership_interval_endpoints():
    Seg = sq.GeneratorSet(1, points=np.array([[0.0], [2.0]]))
    assert sq.vrep_ri_membership(Seg, np.array([1.0]))
    assert not sq.vrep_ri_membership(Seg, np.array([0.0]))
    assert not sq.vrep_ri_membership(Seg, np.array([2.0]))


def test_vrep_ri_membership_singleton_origin():
    S = sq.GeneratorSet(1, points=np.array([[0.0]]))
    assert sq.vrep_ri_membership(S, np.array([0.0]))


def test_vrep_ri_membership_halfline():
    S = sq.GeneratorSet(1, points=np.array([[0.0]]), rays=np.array([[1.0]]))
    assert sq.vrep_ri_membership(S, np.array([1.0]))
    assert not sq.vrep_ri_membership(S, np.array([0.0]))


def test_vrep_ri_membership_strip():
    # {0} x (-inf, 1]: ri needs the second coordinate strictly below 1
    S = sq.GeneratorSet(2, points=np.array([[0.0, 1.0]]),
                        rays=np.array([[0.0, -1.0]]))
    assert sq.vrep_ri_membership(S, np.array([0.0, 0.0]))
    assert not sq.vrep_ri_membership(S, np.array([0.0, 1.0]))
    assert not sq.vrep_ri_membership(S, np.array([1.0, 0.0]))


def test_vrep_support_values():
    S = sq.GeneratorSet(1, points=np.zeros((1, 1)), rays=np.array([[-1.0]]))
    assert sq.vrep_support(S, np.array([1.0])) == 0.0
    assert sq.vrep_support(S, np.array([-1.0])) == np.inf


def test_min_norm_weighted_hand_cases():
    # S = (-inf, 0]; weights scale coordinates before the norm
    S = sq.GeneratorSet(1, points=np.zeros((1, 1)), rays=np.array([[-1.0]]))
    val, z = sq.min_norm_weighted(S, np.array([0.3]), np.array([2.0]))
    assert val == pytest.approx(0.0, abs=1e-9)
    assert z[0] == pytest.approx(-0.3, abs=1e-9)
    val, z = sq.min_norm_weighted(S, np.array([-0.4]), np.array([2.0]))
    assert val == pytest.approx(0.8, abs=1e-9)
    assert abs(z[0]) <= 1e-9

import numpy as np
import pytest
from scipy.optimize import linprog

from mceb.conic import ConicProgram, ConicSolution, solve


def test_builder_validation():
    with pytest.raises(ValueError):
        ConicProgram(0)
    p = ConicProgram(2)
    with pytest.raises(ValueError):
        p.set_objective([1.0, 2.0, 3.0])
    p.add_equality([1.0, 1.0], 1.0, "sum")
    with pytest.raises(ValueError):
        p.add_equality([1.0, 0.0], 0.0, "sum")
    with pytest.raises(ValueError):
        p.add_inequality_block(np.eye(3), np.zeros(2), "bad")


def test_norm_ball_maximum_and_dual():
    # max x0 s.t. ||x|| <= 1: optimum 1 at e_0, SOC multiplier 1
    p = ConicProgram(3)
    p.set_objective([1.0, 0.0, 0.0])
    p.add_soc(np.eye(3), np.zeros(3), np.zeros(3), 1.0, "ball")
    sol = solve(p)
    assert sol.status == "Optimal"
    assert abs(sol.objective - 1.0) < 1e-7
    assert np.allclose(sol.primal, [1.0, 0.0, 0.0], atol=1e-6)
    assert abs(sol.dual("ball") - 1.0) < 1e-6


def test_simplex_vertex():
    # max 2 x0 + x1 over the probability simplex
    p = ConicProgram(3)
    p.set_objective([2.0, 1.0, 0.0])
    p.add_equality(np.ones(3), 1.0, "mass")
    p.add_inequality_block(-np.eye(3), np.zeros(3), "nonneg")
    sol = solve(p)
    assert sol.status == "Optimal"
    assert abs(sol.objective - 2.0) < 1e-8
    assert np.allclose(sol.primal, [1.0, 0.0, 0.0], atol=1e-7)
    # equality dual equals the optimal value's sensitivity to the mass
    assert abs(abs(sol.dual("mass")) - 2.0) < 1e-6
    assert sol.dual("nonneg").shape == (3,)


def test_infeasible_and_unbounded():
    p = ConicProgram(1)
    p.set_objective([1.0])
    p.add_inequality([1.0], -1.0, "hi")
    p.add_inequality([-1.0], -1.0, "lo")  # x >= 1 and x <= -1
    assert solve(p).status == "Infeasible"

    q = ConicProgram(1)
    q.set_objective([1.0])
    q.add_inequality([-1.0], 0.0, "lo")
    assert solve(q).status == "Unbounded"


def test_random_lps_match_linprog():
    # independent oracle: scipy HiGHS on 50 random bounded LPs
    rng = np.random.default_rng(6)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, 4))
        c = rng.normal(size=n)
        A = rng.normal(size=(k, n))
        b = rng.uniform(0.5, 2.0, size=k)
        p = ConicProgram(n)
        p.set_objective(c)
        p.add_inequality_block(A, b, "rows")
        p.add_inequality_block(np.vstack([np.eye(n), -np.eye(n)]),
                               np.full(2 * n, 3.0), "box")
        sol = solve(p)
        ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(-3.0, 3.0)] * n,
                      method="highs")
        assert sol.status == "Optimal" and ref.status == 0
        assert abs(sol.objective - (-ref.fun)) < 1e-6
        # dual feasibility sign: inequality multipliers are nonnegative
        # (single-row blocks come back as plain floats)
        assert (np.atleast_1d(sol.dual("rows")) >= -1e-7).all()
        assert (np.atleast_1d(sol.dual("box")) >= -1e-7).all()


def test_soc_complementary_slackness():
    # max c.x s.t. ||x - d|| <= 1: optimum d + c/||c||, multiplier ||c||
    rng = np.random.default_rng(7)
    for _ in range(10):
        c = rng.normal(size=4)
        d = rng.normal(size=4)
        p = ConicProgram(4)
        p.set_objective(c)
        p.add_soc(np.eye(4), -d, np.zeros(4), 1.0, "ball")
        sol = solve(p)
        nc = np.linalg.norm(c)
        assert sol.status == "Optimal"
        assert np.allclose(sol.primal, d + c / nc, atol=1e-6)
        assert abs(sol.objective - (c @ d + nc)) < 1e-6
        assert abs(sol.dual("ball") - nc) < 1e-5


def test_soc_translated_dual_is_shadow_price():
    # d(value)/d(radius) at ||x|| <= r equals the multiplier
    c = np.array([3.0, -4.0])
    for r in (0.5, 1.0, 2.0):
        p = ConicProgram(2)
        p.set_objective(c)
        p.add_soc(np.eye(2), np.zeros(2), np.zeros(2), r, "ball")
        sol = solve(p)
        assert abs(sol.objective - 5.0 * r) < 1e-7
        assert abs(sol.dual("ball") - 5.0) < 1e-5


def test_dump_mentions_labels():
    p = ConicProgram(2)
    p.add_equality([1.0, 1.0], 1.0, "mass")
    p.add_soc(np.eye(2), np.zeros(2), np.zeros(2), 1.0, "ball")
    text = p.dump()
    assert "eq[mass]" in text and "soc[ball]" in text


def test_solution_dual_lookup():
    sol = ConicSolution(status="Optimal", duals={"a": 1.0})
    assert sol.dual("a") == 1.0
    with pytest.raises(KeyError):
        sol.dual("b")

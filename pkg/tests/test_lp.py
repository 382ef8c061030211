import math
import random

import numpy as np
import pytest

from permopt.lp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LinearConstraint,
    LinearProgram,
    LpBuilder,
    LpError,
    solve,
    verify,
)


def simple_lp(sense="max"):
    b = LpBuilder()
    b.add_var("x", 0.0, 1.0, objective=1.0)
    return b.build(sense)


def test_box_maximum():
    sol = solve(simple_lp())
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(1.0, abs=1e-9)
    assert sol.x[0] == pytest.approx(1.0, abs=1e-9)


def test_infeasible():
    b = LpBuilder()
    x = b.add_var("x", lower=-math.inf)
    b.constraints.append(LinearConstraint({x: 1.0}, LE, 0.0))
    b.constraints.append(LinearConstraint({x: 1.0}, GE, 1.0))
    assert solve(b.build("max")).status == INFEASIBLE


def test_unbounded():
    b = LpBuilder()
    b.add_var("x", lower=0.0, objective=1.0)
    assert solve(b.build("max")).status == UNBOUNDED


def test_verify_accepts_solution():
    lp = simple_lp()
    sol = solve(lp)
    assert verify(lp, sol)


def test_verify_rejects_perturbed_assignment():
    lp = simple_lp()
    sol = solve(lp)
    tol = 1e-6
    sol.x = sol.x.copy()
    sol.x[0] += 10 * tol  # beyond the binding upper bound
    assert not verify(lp, sol, tol)


def test_verify_rejects_misreported_objective():
    lp = simple_lp()
    sol = solve(lp)
    sol.objective += 10 * 1e-6
    assert not verify(lp, sol, 1e-6)


def test_constraint_rejects_zero_coefficients():
    with pytest.raises(LpError):
        LinearConstraint({0: 0.0}, LE, 1.0)


def test_bad_bounds_rejected():
    with pytest.raises(LpError):
        LinearProgram(1, [1.0], [0.0], [0.0], "max")


def test_equality_and_free_variables():
    # max x + y s.t. x + y = 3, x - y <= 1, y free
    b = LpBuilder()
    x = b.add_var("x", 0.0, math.inf, objective=1.0)
    y = b.add_var("y", -math.inf, math.inf, objective=1.0)
    b.add(LinearConstraint({x: 1.0, y: 1.0}, EQ, 3.0))
    b.add(LinearConstraint({x: 1.0, y: -1.0}, LE, 1.0))
    sol = solve(b.build("max"))
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(3.0, abs=1e-8)
    assert verify(b.build("max"), sol)


def test_minimization():
    b = LpBuilder()
    x = b.add_var("x", 0.0, 10.0, objective=1.0)
    b.add(LinearConstraint({x: 1.0}, GE, 2.5))
    sol = solve(b.build("min"))
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(2.5, abs=1e-8)


def test_random_boxes_analytic_optimum():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 6)
        b = LpBuilder()
        expected = 0.0
        for i in range(n):
            lo = rng.uniform(-5, 0)
            hi = lo + rng.uniform(0, 5)
            c = rng.uniform(-3, 3)
            b.add_var(f"x{i}", lo, hi, objective=c)
            expected += c * (hi if c > 0 else lo)
        lp = b.build("max")
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective == pytest.approx(expected, abs=1e-6)
        assert verify(lp, sol)


def test_random_simplices_analytic_optimum():
    # max c.x over the simplex sum(x) <= r, x >= 0: optimum r * max(c, 0)
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(2, 7)
        r = rng.uniform(0.5, 4.0)
        c = [rng.uniform(-2, 3) for _ in range(n)]
        b = LpBuilder()
        xs = [b.add_var(f"x{i}", 0.0, math.inf, objective=c[i]) for i in range(n)]
        b.add(LinearConstraint({x: 1.0 for x in xs}, LE, r))
        lp = b.build("max")
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective == pytest.approx(r * max(max(c), 0.0), abs=1e-6)
        assert verify(lp, sol)


def test_determinism():
    b = LpBuilder()
    xs = [b.add_var(f"x{i}", 0.0, 1.0, objective=1.0) for i in range(5)]
    b.add(LinearConstraint({x: 1.0 for x in xs}, LE, 2.5))
    lp = b.build("max")
    s1, s2 = solve(lp), solve(lp)
    assert s1.status == s2.status == OPTIMAL
    assert s1.objective == s2.objective
    assert np.array_equal(s1.x, s2.x)


def test_builder_folds_singleton_constraints():
    b = LpBuilder()
    x = b.add_var("x", 0.0, 10.0)
    b.add(LinearConstraint({x: 2.0}, LE, 6.0))
    assert b.upper[x] == 3.0
    assert not b.constraints

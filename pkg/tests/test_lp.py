"""Solver tests against enumeration oracles.

The LP oracle enumerates basic points (all n-subsets of active hyperplanes)
of fully bounded random problems, so it is independent of the simplex code
under test.
"""

import itertools

import numpy as np
import pytest

from h2grid.errors import InvalidProblem
from h2grid.lp import (EQ, GE, LE, LinearProblem, ProblemBuilder, solve_lp,
                       solve_milp)


def vertex_oracle(c, a, senses, b, lb, ub, tol=1e-7):
    """Best objective over all vertices of a bounded polyhedron.

    Returns None when no feasible vertex exists.  All variable bounds must
    be finite so the feasible set is a polytope and the optimum (if any)
    sits at a vertex.
    """
    n = len(c)
    planes = []
    for i in range(len(b)):
        planes.append((a[i], b[i]))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        planes.append((e, lb[j]))
        planes.append((e, ub[j]))

    eq_rows = [i for i, s in enumerate(senses) if s == EQ]
    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        if any(i not in combo for i in eq_rows):
            continue
        mat = np.array([planes[i][0] for i in combo])
        rhs = np.array([planes[i][1] for i in combo])
        if abs(np.linalg.det(mat)) < 1e-10:
            continue
        x = np.linalg.solve(mat, rhs)
        if np.any(x < lb - tol) or np.any(x > ub + tol):
            continue
        ax = a @ x
        ok = True
        for i, s in enumerate(senses):
            if s == LE and ax[i] > b[i] + tol:
                ok = False
            elif s == GE and ax[i] < b[i] - tol:
                ok = False
            elif s == EQ and abs(ax[i] - b[i]) > tol:
                ok = False
        if not ok:
            continue
        val = float(c @ x)
        if best is None or val < best:
            best = val
    return best


def build_problem(c, a, senses, b, lb, ub, binaries=()):
    builder = ProblemBuilder()
    cols = [builder.add_var(cost=c[j], lb=lb[j], ub=ub[j],
                            binary=j in binaries) for j in range(len(c))]
    for i in range(len(b)):
        builder.add_constraint([(cols[j], a[i][j]) for j in range(len(c))],
                               senses[i], b[i])
    return builder.build()


def random_instance(rng, n=5, m=4):
    c = rng.uniform(-5, 5, n)
    a = rng.uniform(-3, 3, (m, n))
    senses = [rng.choice([LE, GE, EQ], p=[0.5, 0.35, 0.15]) for _ in range(m)]
    b = rng.uniform(-4, 8, m)
    lb = rng.uniform(-3, 0, n)
    ub = lb + rng.uniform(0.5, 6, n)
    return c, a, senses, b, lb, ub


class TestRandomLPs:
    def test_matches_vertex_oracle(self):
        rng = np.random.default_rng(2001)
        checked = 0
        for _ in range(120):
            c, a, senses, b, lb, ub = random_instance(rng)
            expected = vertex_oracle(c, a, senses, b, lb, ub)
            sol = solve_lp(build_problem(c, a, senses, b, lb, ub))
            if expected is None:
                assert sol.status == "Infeasible"
            else:
                assert sol.status == "Optimal"
                assert sol.objective == pytest.approx(expected, abs=1e-5)
                checked += 1
        assert checked > 40  # most random instances should be feasible

    def test_weak_and_strong_duality(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            c, a, senses, b, lb, ub = random_instance(rng)
            sol = solve_lp(build_problem(c, a, senses, b, lb, ub))
            if sol.status != "Optimal":
                continue
            # strong duality: gap vanishes at the optimum
            assert abs(sol.duality_gap) < 1e-5 * (1 + abs(sol.objective))
            # dual signs: <= rows price <= 0 is wrong for minimization
            for i, s in enumerate(senses):
                if s == LE:
                    assert sol.duals[i] <= 1e-7
                elif s == GE:
                    assert sol.duals[i] >= -1e-7

    def test_determinism(self):
        rng = np.random.default_rng(99)
        c, a, senses, b, lb, ub = random_instance(rng)
        p = build_problem(c, a, senses, b, lb, ub)
        first = solve_lp(p)
        for _ in range(3):
            again = solve_lp(p)
            assert again.status == first.status
            if first.status == "Optimal":
                assert np.array_equal(again.x, first.x)
                assert again.objective == first.objective


class TestKnownLPs:
    def test_bounded_single_var(self):
        # min -x s.t. x <= 3 on x in [0, 10]
        builder = ProblemBuilder()
        x = builder.add_var(cost=-1.0, lb=0.0, ub=10.0)
        builder.add_constraint([(x, 1.0)], LE, 3.0)
        sol = solve_lp(builder.build())
        assert sol.status == "Optimal"
        assert sol.x[0] == pytest.approx(3.0)
        assert sol.duals[0] == pytest.approx(-1.0)

    def test_merit_order_duals(self):
        # two plants, costs 10 and 50, caps 100 each, demand 120:
        # marginal plant sets the balance dual at 50
        builder = ProblemBuilder()
        g1 = builder.add_var(cost=10.0, lb=0.0, ub=100.0)
        g2 = builder.add_var(cost=50.0, lb=0.0, ub=100.0)
        builder.add_constraint([(g1, 1.0), (g2, 1.0)], EQ, 120.0)
        sol = solve_lp(builder.build())
        assert sol.objective == pytest.approx(2000.0)
        assert sol.x[0] == pytest.approx(100.0)
        assert sol.duals[0] == pytest.approx(50.0)

    def test_infeasible(self):
        builder = ProblemBuilder()
        x = builder.add_var(lb=0.0, ub=1.0)
        builder.add_constraint([(x, 1.0)], GE, 2.0)
        assert solve_lp(builder.build()).status == "Infeasible"

    def test_unbounded(self):
        builder = ProblemBuilder()
        x = builder.add_var(cost=-1.0, lb=0.0, ub=np.inf)
        builder.add_constraint([(x, 1.0)], GE, 0.0)
        assert solve_lp(builder.build()).status == "Unbounded"

    def test_free_variables(self):
        # free variable must be able to go negative
        builder = ProblemBuilder()
        x = builder.add_var(cost=1.0, lb=-np.inf, ub=np.inf)
        builder.add_constraint([(x, 1.0)], LE, -5.0)
        sol = solve_lp(builder.build())
        assert sol.status == "Unbounded"

        builder = ProblemBuilder()
        x = builder.add_var(cost=-1.0, lb=-np.inf, ub=np.inf)
        y = builder.add_var(cost=2.0, lb=-np.inf, ub=np.inf)
        builder.add_constraint([(x, 1.0), (y, 1.0)], EQ, -3.0)
        builder.add_constraint([(x, 1.0), (y, -1.0)], LE, 1.0)
        sol = solve_lp(builder.build())
        assert sol.status == "Optimal"
        assert sol.x[0] == pytest.approx(-1.0)
        assert sol.x[1] == pytest.approx(-2.0)

    def test_validation(self):
        with pytest.raises(InvalidProblem):
            LinearProblem(c=np.array([np.nan]), lb=np.zeros(1),
                          ub=np.ones(1), a_rows=np.zeros(0, dtype=int),
                          a_cols=np.zeros(0, dtype=int), a_vals=np.zeros(0),
                          senses=(), rhs=np.zeros(0))


def knapsack_enumeration(values, weights, capacity):
    best = 0.0
    n = len(values)
    for mask in range(1 << n):
        w = sum(weights[j] for j in range(n) if mask >> j & 1)
        if w <= capacity:
            v = sum(values[j] for j in range(n) if mask >> j & 1)
            best = max(best, v)
    return best


class TestMILP:
    def test_knapsack_small(self):
        # values (5, 4, 3), weights (2, 3, 1), capacity 4:
        # optimum picks items 1 and 3 (value 8)
        values, weights, capacity = [5.0, 4.0, 3.0], [2.0, 3.0, 1.0], 4.0
        assert knapsack_enumeration(values, weights, capacity) == 8.0
        builder = ProblemBuilder()
        xs = [builder.add_var(cost=-v, binary=True) for v in values]
        builder.add_constraint([(x, w) for x, w in zip(xs, weights)],
                               LE, capacity)
        sol = solve_milp(builder.build())
        assert sol.status == "Optimal"
        assert sol.objective == pytest.approx(-8.0)
        assert [round(v) for v in sol.x] == [1, 0, 1]

    def test_random_knapsacks(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(3, 9))
            values = rng.uniform(1, 10, n)
            weights = rng.uniform(1, 5, n)
            capacity = float(rng.uniform(0.3, 0.8) * weights.sum())
            expected = knapsack_enumeration(list(values), list(weights),
                                            capacity)
            builder = ProblemBuilder()
            xs = [builder.add_var(cost=-v, binary=True) for v in values]
            builder.add_constraint([(x, w) for x, w in zip(xs, weights)],
                                   LE, capacity)
            sol = solve_milp(builder.build())
            assert sol.status == "Optimal"
            assert -sol.objective == pytest.approx(expected, abs=1e-6)

    def test_facility_toy_subsets(self):
        # 2 facilities, 2 clients; oracle enumerates the 4 open/close
        # patterns with an inner LP over the continuous flows
        rng = np.random.default_rng(17)
        for _ in range(20):
            fixed = rng.uniform(5, 20, 2)
            ship = rng.uniform(1, 6, (2, 2))
            demand = rng.uniform(1, 4, 2)
            cap = float(demand.sum())

            def inner(open_mask):
                builder = ProblemBuilder()
                f = [builder.add_var(
                    cost=ship[i][j], lb=0.0,
                    ub=cap if open_mask[i] else 0.0)
                    for i in range(2) for j in range(2)]
                for j in range(2):
                    builder.add_constraint(
                        [(f[i * 2 + j], 1.0) for i in range(2)],
                        GE, demand[j])
                sol = solve_lp(builder.build())
                if sol.status != "Optimal":
                    return None
                return sol.objective + sum(
                    fixed[i] for i in range(2) if open_mask[i])

            oracle = min(v for v in (inner((a, b)) for a in (0, 1)
                                     for b in (0, 1)) if v is not None)

            builder = ProblemBuilder()
            ys = [builder.add_var(cost=fixed[i], binary=True)
                  for i in range(2)]
            fs = [[builder.add_var(cost=ship[i][j], lb=0.0, ub=cap)
                   for j in range(2)] for i in range(2)]
            for j in range(2):
                builder.add_constraint([(fs[i][j], 1.0) for i in range(2)],
                                       GE, demand[j])
            for i in range(2):
                for j in range(2):
                    builder.add_constraint(
                        [(fs[i][j], 1.0), (ys[i], -cap)], LE, 0.0)
            sol = solve_milp(builder.build())
            assert sol.status == "Optimal"
            assert sol.objective == pytest.approx(oracle, abs=1e-6)

    def test_milp_determinism(self):
        rng = np.random.default_rng(55)
        values = rng.uniform(1, 10, 8)
        weights = rng.uniform(1, 5, 8)
        builder = ProblemBuilder()
        xs = [builder.add_var(cost=-v, binary=True) for v in values]
        builder.add_constraint([(x, w) for x, w in zip(xs, weights)],
                               LE, 0.5 * float(weights.sum()))
        p = builder.build()
        first = solve_milp(p)
        for _ in range(3):
            again = solve_milp(p)
            assert np.array_equal(again.x, first.x)
            assert again.objective == first.objective

"""Dispatch model tests.

The two-node worked instance: cheap 100 MW plant at node 0 (10 EUR/MWh),
expensive 100 MW plant at node 1 (50 EUR/MWh), 120 MW of demand at node 1,
one 30 MW line.  The market sends 100 MW over the line; redispatch must move
70 MW of production from node 0 to node 1, which costs
70 * (50 - 10) = 2800 EUR and leaves the line exactly at its limit.
"""

import numpy as np
import pytest

from h2grid.dispatch import (MODE_NODAL, MODE_UNIFORM_REDISPATCH,
                             nodal_dispatch, redispatch, run_year,
                             uniform_dispatch)
from h2grid.errors import InfeasibleHour
from h2grid.grid import (DISPATCHABLE, Generator, Line, Node, PowerSystem,
                         compute_ptdf)
from h2grid.synth import SyntheticSpec, generate_synthetic_system


def two_node_system(demand_mw=120.0, line_cap=30.0, hours=1):
    nodes = [Node(0, 0.0, 0.0), Node(1, 100.0, 0.0)]
    lines = [Line(0, 0, 1, line_cap, 1.0)]
    gens = [Generator(0, 0, DISPATCHABLE, 10.0, 100.0),
            Generator(1, 1, DISPATCHABLE, 50.0, 100.0)]
    demand = np.zeros((hours, 2))
    demand[:, 1] = demand_mw
    return PowerSystem(tuple(nodes), tuple(lines), tuple(gens), demand,
                       compute_ptdf(nodes, lines, slack=0))


class TestUniformDispatch:
    def test_merit_order(self):
        system = two_node_system()
        result = uniform_dispatch(system, 0)
        assert result.generation_mw[0] == pytest.approx(100.0)
        assert result.generation_mw[1] == pytest.approx(20.0)
        assert result.price == pytest.approx(50.0)
        assert result.cost_eur == pytest.approx(2000.0)

    def test_cheap_plant_only(self):
        system = two_node_system(demand_mw=80.0)
        result = uniform_dispatch(system, 0)
        assert result.price == pytest.approx(10.0)
        assert result.cost_eur == pytest.approx(800.0)

    def test_exact_capacity_boundary(self):
        system = two_node_system(demand_mw=100.0)
        result = uniform_dispatch(system, 0)
        assert result.generation_mw[0] == pytest.approx(100.0)
        assert result.price == pytest.approx(10.0)

    def test_zero_demand(self):
        system = two_node_system(demand_mw=0.0)
        result = uniform_dispatch(system, 0)
        assert result.cost_eur == 0.0
        assert result.price == pytest.approx(10.0)

    def test_excess_demand_raises(self):
        system = two_node_system(demand_mw=250.0)
        with pytest.raises(InfeasibleHour):
            uniform_dispatch(system, 0)


class TestRedispatch:
    def test_micro_oracle_2800(self):
        system = two_node_system()
        market = uniform_dispatch(system, 0)
        adj = redispatch(system, 0, market)
        assert adj.cost_eur == pytest.approx(2800.0, abs=1e-6)
        assert adj.delta_mw[0] == pytest.approx(-70.0, abs=1e-6)
        assert adj.delta_mw[1] == pytest.approx(70.0, abs=1e-6)
        # post-redispatch flow sits exactly on the 30 MW limit
        q = market.generation_mw + adj.delta_mw
        inj = np.array([q[0], q[1] - 120.0])
        flow = system.ptdf.flows(inj)[0]
        assert abs(flow) == pytest.approx(30.0, abs=1e-6)

    def test_zero_sum(self):
        system = two_node_system()
        adj = redispatch(system, 0, uniform_dispatch(system, 0))
        assert adj.delta_mw.sum() == pytest.approx(0.0, abs=1e-7)

    def test_no_congestion_is_free(self):
        system = two_node_system(line_cap=500.0)
        adj = redispatch(system, 0, uniform_dispatch(system, 0))
        assert adj.cost_eur == 0.0
        assert np.all(adj.delta_mw == 0.0)


class TestNodalDispatch:
    def test_two_node_prices(self):
        system = two_node_system()
        result = nodal_dispatch(system, 0)
        assert result.generation_mw[0] == pytest.approx(30.0, abs=1e-6)
        assert result.generation_mw[1] == pytest.approx(90.0, abs=1e-6)
        assert result.nodal_prices[0] == pytest.approx(10.0, abs=1e-6)
        assert result.nodal_prices[1] == pytest.approx(50.0, abs=1e-6)
        assert result.cost_eur == pytest.approx(4800.0, abs=1e-4)

    def test_cost_identity_on_worked_instance(self):
        system = two_node_system()
        market = uniform_dispatch(system, 0)
        adj = redispatch(system, 0, market)
        nodal = nodal_dispatch(system, 0)
        assert market.cost_eur + adj.cost_eur == pytest.approx(
            nodal.cost_eur, rel=1e-9)


class TestCostEquivalenceProperty:
    def test_random_systems(self):
        # uniform cost + redispatch objective equals the nodal optimum on
        # every hour of every random system
        rng = np.random.default_rng(1234)
        for trial in range(25):
            n = int(rng.integers(3, 9))
            spec = SyntheticSpec(
                seed=int(rng.integers(0, 10_000)), n_nodes=n,
                n_lines=min(n + int(rng.integers(0, 4)), n * (n - 1) // 2),
                hours=4, congestion=float(rng.uniform(0.2, 0.95)),
                mean_demand_mw=float(rng.uniform(50, 300)))
            system = generate_synthetic_system(spec)
            for hour in range(4):
                market = uniform_dispatch(system, hour)
                adj = redispatch(system, hour, market)
                nodal = nodal_dispatch(system, hour)
                assert market.cost_eur + adj.cost_eur == pytest.approx(
                    nodal.cost_eur, rel=1e-5, abs=1e-4)


class TestRunYear:
    def test_aggregation(self):
        system = two_node_system(hours=24)
        summary = run_year(system, 24, MODE_UNIFORM_REDISPATCH)
        assert summary.hours == 24
        assert summary.mean_price == pytest.approx(50.0)
        assert summary.congestion_cost_eur == pytest.approx(24 * 2800.0)
        assert summary.total_energy_mwh == pytest.approx(24 * 120.0)
        assert np.all(summary.redispatch_cost_series
                      == pytest.approx(2800.0))

    def test_nodal_mode(self):
        system = two_node_system(hours=6)
        summary = run_year(system, 6, MODE_NODAL)
        assert summary.nodal_price_series.shape == (6, 2)
        assert summary.mean_nodal_prices[0] == pytest.approx(10.0, abs=1e-6)
        assert summary.mean_nodal_prices[1] == pytest.approx(50.0, abs=1e-6)

    def test_identical_hours_identical_results(self):
        system = two_node_system(hours=3)
        summary = run_year(system, 3, MODE_UNIFORM_REDISPATCH)
        assert len(set(summary.price_series.tolist())) == 1

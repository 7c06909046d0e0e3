"""Supply chain siting tests.

The branch-and-bound result is checked against an exhaustive oracle that
enumerates every open/closed pattern of the candidate sites and solves the
remaining continuous flow problem as a plain LP.
"""

import dataclasses
import itertools

import numpy as np
import pytest

from h2grid.chain import (CARRIER_DEFAULTS, ImportSpec, ProductionParams,
                          TariffMap, TransportParams, annuity_factor,
                          build_chain_problem, end_use_cost, solve_chain)
from h2grid.demand import INDUSTRY, ConsumptionLocation
from h2grid.errors import (ChainInfeasible, ConfigError, InvalidDepreciation,
                           StructurallyInfeasible)
from h2grid.grid import Node
from h2grid.lp import solve_lp


class TestAnnuity:
    def test_default_rate(self):
        # 8% over 10 years: 0.08*1.08^10 / (1.08^10 - 1) = 0.149029
        assert annuity_factor(0.08, 10) == pytest.approx(0.149029, abs=1e-6)

    def test_zero_rate(self):
        assert annuity_factor(0.0, 20) == pytest.approx(0.05)

    def test_invalid_years(self):
        with pytest.raises(InvalidDepreciation):
            annuity_factor(0.08, 0)


def flat_tariffs(node_ids, price_eur_kwh=0.05):
    return TariffMap(ep_node={n: price_eur_kwh for n in node_ids},
                     ep_uniform=price_eur_kwh, ngp=0.03)


def industry_sink(sid, kg_day, x, y):
    return ConsumptionLocation(id=sid, kind=INDUSTRY, hd_kg_per_day=kg_day,
                               x=x, y=y)


def subset_oracle(problem):
    """Minimum objective over all open/closed patterns of the sites."""
    n = len(problem.candidates)
    lp = dataclasses.replace(problem.lp, binaries=())
    best = None
    for pattern in itertools.product((0.0, 1.0), repeat=n):
        lb = lp.lb.copy()
        ub = lp.ub.copy()
        for i, v in enumerate(pattern):
            lb[problem.x_vars[i]] = v
            ub[problem.x_vars[i]] = v
        sol = solve_lp(lp.with_bounds(lb, ub))
        if sol.status != "Optimal":
            continue
        if best is None or sol.objective < best - 1e-9:
            best = sol.objective
    return best


class TestChainMILP:
    def test_single_candidate_forced(self):
        nodes = (Node(0, 0.0, 0.0),)
        sinks = (industry_sink(0, 20_000.0, 10.0, 0.0),)
        problem = build_chain_problem(sinks, nodes, flat_tariffs([0]),
                                      CARRIER_DEFAULTS["GH2"],
                                      ProductionParams())
        design = solve_chain(problem)
        assert design.x[0] == 1
        assert design.hp_kg_day[0] == pytest.approx(20_000.0)
        assert design.flows[(0, 0)] == pytest.approx(20_000.0)

    def test_cheap_tariff_wins(self):
        # equal distance, one candidate at half the power price
        nodes = (Node(0, 0.0, 10.0), Node(1, 0.0, -10.0))
        sinks = (industry_sink(0, 30_000.0, 40.0, 0.0),)
        tariffs = TariffMap(ep_node={0: 0.03, 1: 0.06}, ep_uniform=0.06,
                            ngp=0.03)
        design = solve_chain(build_chain_problem(
            sinks, nodes, tariffs, CARRIER_DEFAULTS["GH2"],
            ProductionParams()))
        assert design.x == {0: 1, 1: 0}

    def test_short_haul_wins_at_equal_tariff(self):
        nodes = (Node(0, 0.0, 0.0), Node(1, 500.0, 0.0))
        sinks = (industry_sink(0, 30_000.0, 10.0, 0.0),)
        design = solve_chain(build_chain_problem(
            sinks, nodes, flat_tariffs([0, 1]), CARRIER_DEFAULTS["GH2"],
            ProductionParams()))
        assert design.x == {0: 1, 1: 0}

    def test_import_only(self):
        # production capacity cannot cover demand without the terminal
        nodes = (Node(0, 0.0, 0.0),)
        production = ProductionParams(cap_max_mw=15.0)
        big = production.mw_to_kg_per_day(15.0) + 50_000.0
        sinks = (industry_sink(0, big, 5.0, 0.0),)
        imp = ImportSpec(node=0, x=0.0, y=0.0)
        design = solve_chain(build_chain_problem(
            sinks, nodes, flat_tariffs([0]), CARRIER_DEFAULTS["GH2"],
            production, import_spec=imp))
        assert design.import_kg_day > 0
        assert design.import_kg_day + sum(design.hp_kg_day.values()) == \
            pytest.approx(big)

    def test_supply_shortfall_raises(self):
        nodes = (Node(0, 0.0, 0.0),)
        sinks = (industry_sink(0, 10_000_000.0, 5.0, 0.0),)
        with pytest.raises(StructurallyInfeasible):
            build_chain_problem(sinks, nodes, flat_tariffs([0]),
                                CARRIER_DEFAULTS["GH2"], ProductionParams())

    def test_missing_tariff_raises(self):
        nodes = (Node(0, 0.0, 0.0), Node(1, 1.0, 0.0))
        sinks = (industry_sink(0, 1_000.0, 5.0, 0.0),)
        with pytest.raises(ConfigError):
            build_chain_problem(sinks, nodes, flat_tariffs([0]),
                                CARRIER_DEFAULTS["GH2"], ProductionParams())

    def test_matches_subset_oracle(self):
        rng = np.random.default_rng(4242)
        production = ProductionParams()
        for trial in range(30):
            n_cand = int(rng.integers(2, 6))
            n_sink = int(rng.integers(1, 5))
            nodes = tuple(Node(i, float(rng.uniform(0, 400)),
                               float(rng.uniform(0, 400)))
                          for i in range(n_cand))
            total = float(rng.uniform(0.3, 0.9)) * n_cand \
                * production.cap_max_kg_day
            shares = rng.dirichlet(np.ones(n_sink))
            sinks = tuple(industry_sink(j, float(total * shares[j]),
                                        float(rng.uniform(0, 400)),
                                        float(rng.uniform(0, 400)))
                          for j in range(n_sink))
            tariffs = TariffMap(
                ep_node={i: float(rng.uniform(0.01, 0.09))
                         for i in range(n_cand)},
                ep_uniform=0.05, ngp=0.03)
            carrier = CARRIER_DEFAULTS[
                ("GH2", "LH2", "LOHC")[trial % 3]]
            problem = build_chain_problem(sinks, nodes, tariffs, carrier,
                                          production)
            expected = subset_oracle(problem)
            design = solve_chain(problem)
            lp_part = design.objective_eur_year - sum(
                problem.constants.values())
            assert lp_part == pytest.approx(expected, abs=1e-4)

    def test_solution_postconditions(self):
        # capacity boxes, mass balance and flow conservation on a solved
        # multi-site instance
        rng = np.random.default_rng(9)
        nodes = tuple(Node(i, float(rng.uniform(0, 300)),
                           float(rng.uniform(0, 300))) for i in range(4))
        production = ProductionParams()
        sinks = tuple(industry_sink(j, 45_000.0,
                                    float(rng.uniform(0, 300)),
                                    float(rng.uniform(0, 300)))
                      for j in range(3))
        design = solve_chain(build_chain_problem(
            sinks, nodes, flat_tariffs(range(4)), CARRIER_DEFAULTS["LH2"],
            production))
        total = sum(design.hp_kg_day.values()) + design.import_kg_day
        assert total == pytest.approx(3 * 45_000.0)
        for node_id, open_flag in design.x.items():
            hp = design.hp_kg_day[node_id]
            if open_flag:
                assert production.cap_min_kg_day - 1e-6 <= hp \
                    <= production.cap_max_kg_day + 1e-6
            else:
                assert hp == pytest.approx(0.0, abs=1e-6)
        for sink in sinks:
            inflow = sum(kg for (src, dst), kg in design.flows.items()
                         if dst == sink.id)
            assert inflow == pytest.approx(sink.hd_kg_per_day, rel=1e-6)

    def test_objective_monotone_in_tariff(self):
        nodes = (Node(0, 0.0, 0.0), Node(1, 50.0, 0.0))
        sinks = (industry_sink(0, 40_000.0, 25.0, 0.0),)
        costs = []
        for price in (0.02, 0.05, 0.08):
            design = solve_chain(build_chain_problem(
                sinks, nodes, flat_tariffs([0, 1], price),
                CARRIER_DEFAULTS["GH2"], ProductionParams()))
            costs.append(design.objective_eur_year)
        assert costs[0] < costs[1] < costs[2]

    def test_component_accounting_closes(self):
        nodes = (Node(0, 0.0, 0.0),)
        sinks = (industry_sink(0, 20_000.0, 30.0, 0.0),)
        design = solve_chain(build_chain_problem(
            sinks, nodes, flat_tariffs([0]), CARRIER_DEFAULTS["LOHC"],
            ProductionParams()))
        assert sum(design.components.values()) == pytest.approx(
            design.objective_eur_year, rel=1e-9)


class TestEndUseCost:
    def test_per_kg_breakdown(self):
        nodes = (Node(0, 0.0, 0.0),)
        sinks = (industry_sink(0, 20_000.0, 30.0, 0.0),)
        design = solve_chain(build_chain_problem(
            sinks, nodes, flat_tariffs([0]), CARRIER_DEFAULTS["GH2"],
            ProductionParams()))
        breakdown = end_use_cost(design)
        assert breakdown["total"] == pytest.approx(
            sum(v for k, v in breakdown.items() if k != "total"))
        assert "SCC" not in breakdown  # industry only
        assert breakdown["total"] * design.annual_kg == pytest.approx(
            design.objective_eur_year)

    def test_served_mass_must_be_positive(self):
        nodes = (Node(0, 0.0, 0.0),)
        sinks = (industry_sink(0, 20_000.0, 30.0, 0.0),)
        design = solve_chain(build_chain_problem(
            sinks, nodes, flat_tariffs([0]), CARRIER_DEFAULTS["GH2"],
            ProductionParams()))
        from h2grid.errors import DivisionDomain
        with pytest.raises(DivisionDomain):
            end_use_cost(design, served_kg_per_year=0.0)

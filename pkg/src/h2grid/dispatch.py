"""Hourly electricity market models.

Three per-hour models share one immutable PowerSystem:

* uniform merit-order dispatch for the single-price zone (no grid limits),
* cost-based redispatch restoring line-limit feasibility from the market
  allocation, and
* nodal DC-OPF whose node-balance duals are the locational prices.

Hours are independent (no ramping, no storage), so the annual runner is a
plain loop over pure per-hour functions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleHour, InfeasibleRedispatch
from .lp import GE, LE, EQ, ProblemBuilder, solve_lp

BALANCE_TOL = 1e-6
FLOW_TOL = 1e-6


@dataclass(frozen=True)
class HourDispatch:
    hour: int
    generation_mw: np.ndarray        # per generator
    price: float                     # uniform price (None for nodal runs)
    nodal_prices: np.ndarray         # per node (None for uniform runs)
    served_mw: float
    cost_eur: float


@dataclass(frozen=True)
class RedispatchAdjustment:
    hour: int
    delta_mw: np.ndarray             # per generator
    cost_eur: float


@dataclass(frozen=True)
class AnnualDispatchSummary:
    mode: str
    hours: int
    price_series: np.ndarray                 # uniform price per hour
    nodal_price_series: np.ndarray           # (hours, nodes) or None
    mean_price: float
    mean_nodal_prices: np.ndarray            # per node or None
    congestion_cost_eur: float
    redispatch_cost_series: np.ndarray       # per hour (zeros for nodal mode)
    total_energy_mwh: float
    generation_mwh: np.ndarray               # per generator
    hourly: tuple = None                     # per-hour results, optional


def _capacities(system, hour):
    return np.array([g.capacity_at(hour) for g in system.generators])


def _injections(system, hour, generation):
    inj = -system.demand[hour].astype(float).copy()
    for g, q in zip(system.generators, generation):
        inj[g.node] += q
    return inj


def uniform_dispatch(system, hour):
    """Merit-order dispatch of the whole zone; price is the marginal unit's
    cost (the dual of the zonal balance constraint)."""
    caps = _capacities(system, hour)
    demand = float(system.demand[hour].sum())
    if demand > caps.sum() + BALANCE_TOL:
        raise InfeasibleHour(
            f"hour {hour}: demand exceeds available capacity",
            hour=hour, deficit_mw=demand - caps.sum())

    order = sorted(range(len(caps)),
                   key=lambda g: (system.generators[g].marginal_cost, g))
    q = np.zeros(len(caps))
    remaining = demand
    price = min(system.generators[g].marginal_cost for g in order) \
        if order else 0.0
    for g in order:
        if remaining <= 0:
            break
        take = min(caps[g], remaining)
        if take <= 0:
            continue
        q[g] = take
        remaining -= take
        price = system.generators[g].marginal_cost
    cost = float(sum(q[g] * system.generators[g].marginal_cost
                     for g in range(len(caps))))
    return HourDispatch(hour=hour, generation_mw=q, price=price,
                        nodal_prices=None, served_mw=demand, cost_eur=cost)


def redispatch(system, hour, market):
    """Minimum-cost generation adjustment restoring line feasibility.

    Deltas sum to zero; adjusted outputs stay within [0, capacity]; the hour
    cost is the signed optimal objective (net extra production cost).
    """
    ptdf = system.ptdf
    caps = _capacities(system, hour)
    q0 = market.generation_mw
    base_inj = _injections(system, hour, q0)
    base_flows = ptdf.flows(base_inj)

    if np.all(np.abs(base_flows) <= ptdf.merged_capacity + FLOW_TOL):
        return RedispatchAdjustment(hour=hour, delta_mw=np.zeros(len(caps)),
                                    cost_eur=0.0)

    builder = ProblemBuilder()
    deltas = [builder.add_var(cost=system.generators[g].marginal_cost,
                              lb=-q0[g], ub=caps[g] - q0[g])
              for g in range(len(caps))]
    builder.add_constraint([(d, 1.0) for d in deltas], EQ, 0.0)
    for k in range(ptdf.entries.shape[0]):
        coeffs = [(deltas[g], ptdf.entries[k, system.generators[g].node])
                  for g in range(len(caps))]
        limit = ptdf.merged_capacity[k]
        builder.add_constraint(coeffs, LE, limit - base_flows[k])
        builder.add_constraint(coeffs, GE, -limit - base_flows[k])
    sol = solve_lp(builder.build())
    if sol.status != "Optimal":
        raise InfeasibleRedispatch(
            f"hour {hour}: no feasible redispatch within capacities",
            hour=hour)
    return RedispatchAdjustment(hour=hour, delta_mw=sol.x,
                                cost_eur=float(sol.objective))


def nodal_dispatch(system, hour):
    """Network-constrained dispatch; per-node prices are the duals of the
    node balance constraints."""
    ptdf = system.ptdf
    caps = _capacities(system, hour)
    demand = system.demand[hour]
    n = system.n_nodes

    builder = ProblemBuilder()
    gen_vars = [builder.add_var(cost=g.marginal_cost, lb=0.0, ub=caps[i])
                for i, g in enumerate(system.generators)]
    inj_vars = [builder.add_var(lb=-np.inf, ub=np.inf) for _ in range(n)]

    balance_rows = []
    for node in range(n):
        coeffs = [(gen_vars[i], 1.0)
                  for i, g in enumerate(system.generators) if g.node == node]
        coeffs.append((inj_vars[node], -1.0))
        balance_rows.append(
            builder.add_constraint(coeffs, EQ, float(demand[node])))
    builder.add_constraint([(v, 1.0) for v in inj_vars], EQ, 0.0)
    for k in range(ptdf.entries.shape[0]):
        coeffs = [(inj_vars[node], ptdf.entries[k, node]) for node in range(n)]
        limit = ptdf.merged_capacity[k]
        builder.add_constraint(coeffs, LE, limit)
        builder.add_constraint(coeffs, GE, -limit)

    sol = solve_lp(builder.build())
    if sol.status != "Optimal":
        raise InfeasibleHour(f"hour {hour}: nodal dispatch infeasible",
                             hour=hour)
    q = sol.x[: len(gen_vars)]
    prices = np.array([sol.duals[r] for r in balance_rows])
    return HourDispatch(hour=hour, generation_mw=q, price=None,
                        nodal_prices=prices, served_mw=float(demand.sum()),
                        cost_eur=float(sol.objective))


MODE_UNIFORM_REDISPATCH = "uniform+redispatch"
MODE_NODAL = "nodal"


def run_year(system, hours, mode, keep_hourly=False):
    """Aggregate per-hour dispatch over *hours* independent hours."""
    if hours > system.horizon:
        raise InfeasibleHour(
            f"requested {hours} hours but series cover {system.horizon}")
    n_gen = len(system.generators)
    price_series = np.zeros(hours)
    nodal_series = None
    redispatch_series = np.zeros(hours)
    generation = np.zeros(n_gen)
    total_energy = 0.0
    hourly = [] if keep_hourly else None

    if mode == MODE_UNIFORM_REDISPATCH:
        for t in range(hours):
            market = uniform_dispatch(system, t)
            adj = redispatch(system, t, market)
            price_series[t] = market.price
            redispatch_series[t] = adj.cost_eur
            generation += market.generation_mw + adj.delta_mw
            total_energy += market.served_mw
            if keep_hourly:
                hourly.append((market, adj))
    elif mode == MODE_NODAL:
        nodal_series = np.zeros((hours, system.n_nodes))
        for t in range(hours):
            result = nodal_dispatch(system, t)
            nodal_series[t] = result.nodal_prices
            generation += result.generation_mw
            total_energy += result.served_mw
            if keep_hourly:
                hourly.append(result)
    else:
        raise ValueError(f"unknown dispatch mode {mode!r}")

    return AnnualDispatchSummary(
        mode=mode,
        hours=hours,
        price_series=price_series if mode == MODE_UNIFORM_REDISPATCH else None,
        nodal_price_series=nodal_series,
        mean_price=(float(price_series.mean())
                    if mode == MODE_UNIFORM_REDISPATCH else None),
        mean_nodal_prices=(nodal_series.mean(axis=0)
                           if nodal_series is not None else None),
        congestion_cost_eur=float(redispatch_series.sum()),
        redispatch_cost_series=redispatch_series,
        total_energy_mwh=float(total_energy),
        generation_mwh=generation,
        hourly=tuple(hourly) if keep_hourly else None,
    )

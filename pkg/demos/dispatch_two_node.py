"""Walk through the two-node worked dispatch instance.

A cheap 100 MW plant sits at node 0, an expensive 100 MW plant at node 1,
and 120 MW of demand at node 1 behind a single 30 MW line.  The uniform
market ignores the line and ships 100 MW across it; redispatch then moves
70 MW of production to the demand side at a cost of 70 * (50 - 10) = 2800
EUR, leaving the line exactly at its limit.  The nodal market reaches the
same physical outcome directly and its total cost equals the uniform cost
plus the redispatch cost.
"""

import numpy as np

from h2grid import (DISPATCHABLE, Generator, Line, Node, PowerSystem,
                    compute_ptdf, nodal_dispatch, redispatch,
                    uniform_dispatch)


def build_system():
    nodes = [Node(0, 0.0, 0.0), Node(1, 100.0, 0.0)]
    lines = [Line(0, 0, 1, 30.0, 1.0)]
    gens = [Generator(0, 0, DISPATCHABLE, 10.0, 100.0),
            Generator(1, 1, DISPATCHABLE, 50.0, 100.0)]
    demand = np.array([[0.0, 120.0]])
    return PowerSystem(tuple(nodes), tuple(lines), tuple(gens), demand,
                       compute_ptdf(nodes, lines, slack=0))


def main():
    system = build_system()

    market = uniform_dispatch(system, 0)
    print("uniform market")
    print(f"  generation: {market.generation_mw} MW")
    print(f"  price: {market.price:.2f} EUR/MWh, "
          f"cost: {market.cost_eur:.2f} EUR")

    injections = np.array([market.generation_mw[0],
                           market.generation_mw[1] - 120.0])
    print(f"  implied line flow: {system.ptdf.flows(injections)[0]:.1f} MW "
          f"(limit 30 MW)")

    adj = redispatch(system, 0, market)
    print("redispatch")
    print(f"  deltas: {adj.delta_mw} MW (zero sum)")
    print(f"  cost: {adj.cost_eur:.2f} EUR")

    nodal = nodal_dispatch(system, 0)
    print("nodal market")
    print(f"  generation: {nodal.generation_mw} MW")
    print(f"  nodal prices: {nodal.nodal_prices} EUR/MWh")
    print(f"  cost: {nodal.cost_eur:.2f} EUR")

    total = market.cost_eur + adj.cost_eur
    print(f"identity: uniform {market.cost_eur:.0f} + redispatch "
          f"{adj.cost_eur:.0f} = nodal {total:.0f} EUR")


if __name__ == "__main__":
    main()

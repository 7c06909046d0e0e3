"""Site electrolyzers against a spread of nodal electricity tariffs.

Three industrial consumers must be supplied by trucked hydrogen from up to
four candidate electrolyzer sites or a fixed-price import terminal.  The
solver weighs cheap-but-distant power against expensive-but-close power,
for each carrier state, and reports the per-kilogram cost breakdown.
"""

from h2grid import (CARRIER_DEFAULTS, INDUSTRY, ConsumptionLocation,
                    ImportSpec, Node, ProductionParams, TariffMap,
                    build_chain_problem, end_use_cost, solve_chain)

CANDIDATES = (
    Node(0, 0.0, 0.0),      # cheap power, far north
    Node(1, 80.0, 150.0),
    Node(2, 160.0, 300.0),
    Node(3, 200.0, 420.0),  # expensive power, near the consumers
)
TARIFFS = TariffMap(ep_node={0: 0.025, 1: 0.035, 2: 0.05, 3: 0.065},
                    ep_uniform=0.05, ngp=0.03)
SINKS = (
    ConsumptionLocation(id=0, kind=INDUSTRY, hd_kg_per_day=60_000.0,
                        x=180.0, y=400.0),
    ConsumptionLocation(id=1, kind=INDUSTRY, hd_kg_per_day=40_000.0,
                        x=220.0, y=430.0),
    ConsumptionLocation(id=2, kind=INDUSTRY, hd_kg_per_day=25_000.0,
                        x=150.0, y=380.0),
)
IMPORT_TERMINAL = ImportSpec(node=3, x=240.0, y=450.0)


def main():
    for name in ("GH2", "LH2", "LOHC"):
        problem = build_chain_problem(
            SINKS, CANDIDATES, TARIFFS, CARRIER_DEFAULTS[name],
            ProductionParams(), import_spec=IMPORT_TERMINAL)
        design = solve_chain(problem)
        breakdown = end_use_cost(design)
        open_sites = [f"node {i} ({kg:,.0f} kg/day)"
                      for i, kg in sorted(design.hp_kg_day.items())
                      if kg > 0]
        if design.import_kg_day > 0:
            open_sites.append(f"import ({design.import_kg_day:,.0f} kg/day)")
        print(f"{name}: {design.objective_eur_year / 1e6:8.2f} MEUR/a, "
              f"{breakdown['total']:5.2f} EUR/kg")
        print(f"  supply: {', '.join(open_sites)}")
        print(f"  trucks: {design.n_trucks_rounded} "
              f"({design.truck_hours_per_day:.1f} driving h/day)")


if __name__ == "__main__":
    main()

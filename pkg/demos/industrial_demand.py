"""Build the industrial hydrogen demand inventory and a station plan.

Annual demand follows the sector formulas: ammonia and methanol from plant
capacity in product tons, direct-reduction steel from hourly hydrogen use
or annual hydrogen tonnage net of on-site supply, and refineries from
crude throughput with a demand-decline factor and the externally supplied
share.  Road transport is covered by a fueling station plan sized from an
energy budget and a per-station daily turnover.
"""

from h2grid import (TRUCK_STATION_TURNOVER, IndustrialSite,
                    industrial_site_demand, station_count)

TWH = 1e9  # kWh

SITES = [
    IndustrialSite("ammonia plants", "ammonia", "tons_per_year",
                   2_955_000.0),
    IndustrialSite("methanol plants", "methanol", "tons_per_year",
                   1_865_000.0),
    IndustrialSite("DR steel, hourly basis", "steel", "kg_per_hour",
                   7_400.0),
    IndustrialSite("DR steel, annual basis", "steel", "tons_h2_per_year",
                   200_000.0, deduction_kg_per_hour=1_700.0),
    IndustrialSite("refineries", "refinery", "tons_per_year",
                   87_013_000.0),
]


def main():
    total = 0.0
    for site in SITES:
        kwh = industrial_site_demand(site)
        total += kwh
        print(f"{site.name:28s} {kwh / TWH:7.2f} TWh/a")
    print(f"{'industry total':28s} {total / TWH:7.2f} TWh/a")

    trucks_kwh = 1.0 * TWH
    n = station_count(trucks_kwh, TRUCK_STATION_TURNOVER)
    print(f"\n1 TWh/a of truck fuel at {TRUCK_STATION_TURNOVER} kg/day "
          f"per station -> {n} stations")


if __name__ == "__main__":
    main()

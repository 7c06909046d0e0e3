"""Hydrogen supply-chain siting MILP.

Chooses electrolyzer locations and sizes, the optional overseas import
volume, and truck routes from sources to consumption locations, minimizing
total annual end-use cost: production (capital + operating), conversion for
the chosen carrier state (LH2 / GH2 / LOHC), trucking, and fueling stations
for transport-sector sinks.

Conversion and station capital blocks depend only on exogenous totals, so
they enter as constants; everything else is linear in the decision
variables, with big-M links tying route flows to their binary connections.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .demand import (DAYS_PER_YEAR, INDUSTRY, LHV_KWH_PER_KG,
                     STATION_CAPACITY_KG_DAY, STATION_DEFAULTS,
                     station_investment_cost)
from .errors import (ChainInfeasible, ConfigError, DivisionDomain,
                     InvalidDepreciation, StructurallyInfeasible)
from .lp import EQ, GE, LE, ProblemBuilder, solve_milp

CARRIERS = ("LH2", "GH2", "LOHC")

COMPONENTS = ("PCC", "POC", "CCC", "COC", "TCC", "TOC", "SCC", "SOC")


def annuity_factor(wacc, years):
    """Capital-recovery fraction per year; 1/years at zero interest."""
    if years < 1:
        raise InvalidDepreciation(f"depreciation period {years} < 1 year")
    if wacc < 0:
        raise InvalidDepreciation("negative cost of capital")
    if wacc == 0:
        return 1.0 / years
    growth = (1.0 + wacc) ** years
    return growth * wacc / (growth - 1.0)


@dataclass(frozen=True)
class ConversionStep:
    name: str
    depreciation_years: int
    o_and_m: float
    ec_kwh_per_kg: float
    ngc_kwh_per_kg: float
    loss: float

    def investment(self, daily_kg):
        """Bulk investment cost as a function of total daily throughput."""
        x = max(daily_kg, 0.0)
        if self.name == "compression":
            return 15e3 * x ** 0.6089 * 3.0
        if self.name == "liquefaction":
            return 105e6 * (x / 50_000.0) ** 0.66
        if self.name == "evaporation":
            return 3e3 * x / 1_000.0
        if self.name == "hydrogenation":
            return 40e6 * (x / 300_000.0) ** 0.66
        if self.name == "dehydrogenation":
            return 30e6 * (x / 300_000.0) ** 0.66
        raise ConfigError(f"unknown conversion step {self.name!r}")


# compressor electricity use is pressure dependent; 1.6 kWh/kg matches
# 250 bar trailer filling and can be overridden in configuration
CONVERSION_STEPS = {
    "compression": ConversionStep("compression", 15, 0.04, 1.6, 0.0, 0.005),
    "liquefaction": ConversionStep("liquefaction", 20, 0.04, 6.78, 0.0, 0.0165),
    "evaporation": ConversionStep("evaporation", 10, 0.03, 0.6, 0.0, 0.0),
    "hydrogenation": ConversionStep("hydrogenation", 20, 0.03, 0.37, 0.0, 0.01),
    "dehydrogenation": ConversionStep("dehydrogenation", 20, 0.03, 0.37, 11.7, 0.01),
}


@dataclass(frozen=True)
class CarrierParams:
    state: str
    trailer_capacity_kg: float
    trailer_invest_eur: float
    production_steps: tuple      # conversion at the production site
    consumption_steps: tuple     # conversion at the consumption site
    loading_hours: float = 1.5   # round-trip loading + unloading
    station: object = None

    def __post_init__(self):
        if self.station is None:
            object.__setattr__(self, "station", STATION_DEFAULTS[self.state])


CARRIER_DEFAULTS = {
    "LH2": CarrierParams("LH2", 4_300.0, 860_000.0,
                         (CONVERSION_STEPS["liquefaction"],),
                         (CONVERSION_STEPS["evaporation"],)),
    "GH2": CarrierParams("GH2", 1_100.0, 660_000.0,
                         (CONVERSION_STEPS["compression"],), ()),
    "LOHC": CarrierParams("LOHC", 1_620.0, 150_000.0,
                          (CONVERSION_STEPS["hydrogenation"],),
                          (CONVERSION_STEPS["dehydrogenation"],)),
}


@dataclass(frozen=True)
class ProductionParams:
    ic_eur_per_kw: float = 604.0
    depreciation_years: int = 10
    o_and_m: float = 0.04
    ec_kwh_per_kg: float = 47.6
    ee: float = 0.70
    ed_kwh_per_kg: float = LHV_KWH_PER_KG
    capacity_factor: float = 0.70    # flat operation at 70% of full capacity
    cap_min_mw: float = 10.0
    cap_max_mw: float = 100.0
    wacc: float = 0.08

    @property
    def flh(self):
        return 8760.0 * self.capacity_factor

    def mw_to_kg_per_day(self, mw):
        return mw * 1000.0 * 24.0 / self.ec_kwh_per_kg

    @property
    def cap_min_kg_day(self):
        return self.mw_to_kg_per_day(self.cap_min_mw)

    @property
    def cap_max_kg_day(self):
        return self.mw_to_kg_per_day(self.cap_max_mw)


@dataclass(frozen=True)
class TransportParams:
    truck_invest_eur: float = 174_000.0
    truck_depreciation_years: int = 8
    truck_o_and_m: float = 0.12
    trailer_depreciation_years: int = 12
    trailer_o_and_m: float = 0.02
    fuel_kg_per_km: float = 5.19 / 100.0
    fuel_eur_per_kg: float = 7.91
    toll_eur_per_km: float = 0.15
    wage_eur_per_hour: float = 35.0
    speed_km_per_hour: float = 50.0
    detour_factor: float = 1.3
    # volume-proportional trips on industry routes (physically necessary
    # when a route moves more than one trailer load per day); switch off to
    # charge industry routes one trip per day per open connection
    industry_frequency_by_volume: bool = True


@dataclass(frozen=True)
class ImportSpec:
    node: int
    x: float = 0.0
    y: float = 0.0
    cap_kg_per_day: float = 27.40e6 / LHV_KWH_PER_KG  # 27.40 GWh/day
    cost_eur_per_kg: float = 3.48


@dataclass(frozen=True)
class TariffMap:
    ep_node: dict               # node id -> EUR/kWh, production side
    ep_uniform: float           # EUR/kWh, downstream conversion and stations
    ngp: float = 0.03           # EUR/kWh natural gas


@dataclass(frozen=True)
class ChainProblem:
    lp: object
    candidates: tuple           # grid Nodes hosting electrolyzer candidates
    sinks: tuple                # ConsumptionLocations
    carrier: CarrierParams
    production: ProductionParams
    transport: TransportParams
    tariffs: TariffMap
    import_spec: object
    x_vars: tuple
    hp_vars: tuple              # per candidate; import HP var appended if any
    import_hp_var: int
    y_vars: dict                # (source index, sink index) -> var
    ht_vars: dict
    hp_cost: dict = field(default_factory=dict)   # per-source per-kg/day cost split
    route_cost: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    total_demand_kg_day: float = 0.0

    @property
    def sources(self):
        """Source labels: candidate node ids, then 'import' if present."""
        labels = [node.id for node in self.candidates]
        if self.import_spec is not None:
            labels.append("import")
        return labels


@dataclass(frozen=True)
class ChainDesign:
    carrier: str
    x: dict                     # candidate node -> 0/1
    hp_kg_day: dict             # candidate node -> kg/day
    import_node: int
    import_kg_day: float
    flows: dict                 # (source label, sink id) -> kg/day
    links: dict                 # (source label, sink id) -> 0/1
    truck_hours_per_day: float
    n_trucks: float             # continuous, used in the cost accounting
    n_trucks_rounded: int
    components: dict            # component -> EUR/year
    objective_eur_year: float
    annual_kg: float

    @property
    def total_cost_eur_year(self):
        return sum(self.components.values())


def _distance(node, sink):
    return math.hypot(node.x - sink.x, node.y - sink.y)


def _trip_cost_bundle(dist_km, transport, carrier, wacc):
    """Per-trip occupied hours, operating money, and the annuitized vehicle
    cost per occupied truck-hour-per-day."""
    drive = 2.0 * transport.detour_factor * dist_km / transport.speed_km_per_hour
    hours = drive + carrier.loading_hours
    money = (hours * transport.wage_eur_per_hour
             + 2.0 * transport.detour_factor * dist_km
             * (transport.fuel_kg_per_km * transport.fuel_eur_per_kg
                + transport.toll_eur_per_km))
    vehicle_annual = (
        transport.truck_invest_eur * (1.0 + transport.truck_o_and_m)
        * annuity_factor(wacc, transport.truck_depreciation_years)
        + carrier.trailer_invest_eur * (1.0 + transport.trailer_o_and_m)
        * annuity_factor(wacc, transport.trailer_depreciation_years))
    return hours, money, vehicle_annual


def build_chain_problem(sinks, candidates, tariffs, carrier, production,
                        transport=None, import_spec=None):
    """Assemble the siting MILP for one carrier state and tariff map."""
    transport = transport or TransportParams()
    sinks = tuple(sinks)
    candidates = tuple(candidates)
    total_demand = sum(s.hd_kg_per_day for s in sinks)

    supply_cap = len(candidates) * production.cap_max_kg_day
    if import_spec is not None:
        supply_cap += import_spec.cap_kg_per_day
    if supply_cap + 1e-9 < total_demand:
        raise StructurallyInfeasible(
            f"total supply capacity {supply_cap:.0f} kg/day below demand "
            f"{total_demand:.0f} kg/day")
    for node in candidates:
        if node.id not in tariffs.ep_node:
            raise ConfigError(f"tariff map missing candidate node {node.id}")

    wacc = production.wacc
    af_prod = annuity_factor(wacc, production.depreciation_years)

    # HP cost coefficients, EUR/year per kg/day, split by component
    pcc_coeff = (DAYS_PER_YEAR * production.ed_kwh_per_kg
                 * production.ic_eur_per_kw
                 / (production.flh * production.ee)
                 * (1.0 + production.o_and_m) * af_prod)
    coc_downstream = sum(
        (step.ec_kwh_per_kg * tariffs.ep_uniform
         + step.ngc_kwh_per_kg * tariffs.ngp) * (1.0 + step.loss)
        for step in carrier.consumption_steps) * DAYS_PER_YEAR

    hp_cost = {}
    for node in candidates:
        ep = tariffs.ep_node[node.id]
        coc_production = sum(
            (step.ec_kwh_per_kg * ep + step.ngc_kwh_per_kg * tariffs.ngp)
            * (1.0 + step.loss)
            for step in carrier.production_steps) * DAYS_PER_YEAR
        hp_cost[node.id] = {
            "PCC": pcc_coeff,
            "POC": production.ec_kwh_per_kg * ep * DAYS_PER_YEAR,
            "COC": coc_production + coc_downstream,
        }
    if import_spec is not None:
        # imports arrive already converted: no production-side step
        hp_cost["import"] = {
            "PCC": 0.0,
            "POC": import_spec.cost_eur_per_kg * DAYS_PER_YEAR,
            "COC": coc_downstream,
        }

    builder = ProblemBuilder()
    x_vars = []
    hp_vars = []
    for node in candidates:
        x_vars.append(builder.add_var(binary=True))
        hp_vars.append(builder.add_var(lb=0.0, ub=production.cap_max_kg_day))
    import_hp_var = None
    if import_spec is not None:
        import_hp_var = builder.add_var(lb=0.0, ub=import_spec.cap_kg_per_day)

    sources = list(candidates) + (["import"] if import_spec is not None else [])
    source_hp = hp_vars + ([import_hp_var] if import_spec is not None else [])

    # route variables and their cost coefficients
    y_vars, ht_vars, route_cost = {}, {}, {}
    for pi, source in enumerate(sources):
        src_node = import_spec if source == "import" else source
        for ci, sink in enumerate(sinks):
            hours, money, vehicle = _trip_cost_bundle(
                _distance(src_node, sink), transport, carrier, wacc)
            per_trip_toc = money * DAYS_PER_YEAR
            per_trip_tcc = hours / 24.0 * vehicle
            fixed_daily = (sink.kind == INDUSTRY
                           and not transport.industry_frequency_by_volume)
            # routes whose cost rides on the flow variable need no integer
            # link decision; a continuous indicator keeps the tree small
            y = builder.add_var(lb=0.0, ub=1.0, binary=fixed_daily)
            ht = builder.add_var(lb=0.0, ub=sink.hd_kg_per_day)
            y_vars[(pi, ci)] = y
            ht_vars[(pi, ci)] = ht
            if fixed_daily:
                route_cost[(pi, ci)] = {
                    "var": y, "kind": "per_day",
                    "TOC": per_trip_toc, "TCC": per_trip_tcc,
                    "hours_per_day": hours}
            else:
                # trips scale with delivered volume: every kg implies
                # 1 / trailer capacity trips per day
                trips_per_kg = 1.0 / carrier.trailer_capacity_kg
                route_cost[(pi, ci)] = {
                    "var": ht, "kind": "per_kg",
                    "TOC": per_trip_toc * trips_per_kg,
                    "TCC": per_trip_tcc * trips_per_kg,
                    "hours_per_day": hours * trips_per_kg}

    # objective coefficients
    for pi, source in enumerate(sources):
        label = source.id if source != "import" else "import"
        builder.set_cost(source_hp[pi], sum(hp_cost[label].values()))
    for rc in route_cost.values():
        builder.set_cost(rc["var"], rc["TOC"] + rc["TCC"])

    # constraints
    builder.add_constraint([(v, 1.0) for v in source_hp], EQ, total_demand)
    for i, node in enumerate(candidates):
        builder.add_constraint(
            [(hp_vars[i], 1.0), (x_vars[i], -production.cap_min_kg_day)],
            GE, 0.0)
        builder.add_constraint(
            [(hp_vars[i], 1.0), (x_vars[i], -production.cap_max_kg_day)],
            LE, 0.0)
    for pi in range(len(sources)):
        builder.add_constraint(
            [(ht_vars[(pi, ci)], 1.0) for ci in range(len(sinks))]
            + [(source_hp[pi], -1.0)], LE, 0.0)
    for ci, sink in enumerate(sinks):
        builder.add_constraint(
            [(ht_vars[(pi, ci)], 1.0) for pi in range(len(sources))],
            GE, sink.hd_kg_per_day)
    for (pi, ci), ht in ht_vars.items():
        big_m = max(sinks[ci].hd_kg_per_day, 1.0)
        builder.add_constraint([(ht, 1.0), (y_vars[(pi, ci)], -big_m)],
                               LE, 0.0)

    constants = _constant_costs(sinks, carrier, tariffs, wacc, total_demand,
                                import_spec)

    return ChainProblem(
        lp=builder.build(), candidates=candidates, sinks=sinks,
        carrier=carrier, production=production, transport=transport,
        tariffs=tariffs, import_spec=import_spec,
        x_vars=tuple(x_vars), hp_vars=tuple(hp_vars),
        import_hp_var=import_hp_var, y_vars=y_vars, ht_vars=ht_vars,
        hp_cost=hp_cost, route_cost=route_cost, constants=constants,
        total_demand_kg_day=total_demand)


def _constant_costs(sinks, carrier, tariffs, wacc, total_demand, import_spec):
    """Conversion, station capital and station operating blocks; these depend
    only on exogenous volumes."""
    produced_domestically = total_demand
    if import_spec is not None:
        produced_domestically = max(
            total_demand - import_spec.cap_kg_per_day, 0.0)

    ccc = 0.0
    for step in carrier.production_steps:
        ccc += (step.investment(produced_domestically) * (1.0 + step.o_and_m)
                * annuity_factor(wacc, step.depreciation_years))
    for step in carrier.consumption_steps:
        ccc += (step.investment(total_demand) * (1.0 + step.o_and_m)
                * annuity_factor(wacc, step.depreciation_years))

    station_sinks = [s for s in sinks if s.kind != INDUSTRY]
    scc = soc = 0.0
    if station_sinks:
        params = carrier.station
        invest = station_investment_cost(
            STATION_CAPACITY_KG_DAY, len(station_sinks), params)
        scc = (invest * len(station_sinks) * (1.0 + params.o_and_m)
               * annuity_factor(wacc, params.depreciation_years))
        station_kg = sum(s.hd_kg_per_day for s in station_sinks)
        soc = ((params.ec_kwh_per_kg * tariffs.ep_uniform
                + params.ngc_kwh_per_kg * tariffs.ngp)
               * station_kg * DAYS_PER_YEAR)
    return {"CCC": ccc, "SCC": scc, "SOC": soc}


def solve_chain(problem, node_limit=200000):
    """Solve the MILP and decode it into a verified ChainDesign."""
    sol = solve_milp(problem.lp, node_limit=node_limit)
    if sol.status != "Optimal":
        raise ChainInfeasible(f"chain MILP status {sol.status}")
    return decode_design(problem, sol.x, sol.objective)


def decode_design(problem, values, lp_objective):
    candidates = problem.candidates
    sinks = problem.sinks
    tol = 1e-6 * (1.0 + problem.total_demand_kg_day)

    def _clamp(v):
        return 0.0 if abs(v) < 1e-9 else float(v)

    x = {node.id: int(round(values[problem.x_vars[i]]))
         for i, node in enumerate(candidates)}
    hp = {node.id: _clamp(values[problem.hp_vars[i]])
          for i, node in enumerate(candidates)}
    import_kg = (_clamp(values[problem.import_hp_var])
                 if problem.import_hp_var is not None else 0.0)

    sources = problem.sources
    flows, links = {}, {}
    for (pi, ci), var in problem.ht_vars.items():
        v = float(values[var])
        yv = int(round(values[problem.y_vars[(pi, ci)]]))
        if v > 1e-9 or yv:
            flows[(sources[pi], sinks[ci].id)] = v
            links[(sources[pi], sinks[ci].id)] = 1 if v > 1e-9 else yv

    _check_feasibility(problem, x, hp, import_kg, values, tol)

    # recompute cost components from the decision values
    components = {name: 0.0 for name in COMPONENTS}
    components.update(problem.constants)
    for node in candidates:
        for name in ("PCC", "POC", "COC"):
            components[name] += problem.hp_cost[node.id][name] * hp[node.id]
    if problem.import_spec is not None:
        for name in ("PCC", "POC", "COC"):
            components[name] += problem.hp_cost["import"][name] * import_kg
    truck_hours = 0.0
    for key, rc in problem.route_cost.items():
        activity = float(values[rc["var"]])
        components["TOC"] += rc["TOC"] * activity
        components["TCC"] += rc["TCC"] * activity
        truck_hours += rc["hours_per_day"] * activity

    objective = lp_objective + sum(problem.constants.values())
    recomputed = sum(components.values())
    if abs(recomputed - objective) > 1e-6 * (1.0 + abs(objective)):
        raise ChainInfeasible(
            f"cost accounting mismatch: components {recomputed:.6f} vs "
            f"objective {objective:.6f}")

    annual_kg = problem.total_demand_kg_day * DAYS_PER_YEAR
    return ChainDesign(
        carrier=problem.carrier.state, x=x, hp_kg_day=hp,
        import_node=(problem.import_spec.node
                     if problem.import_spec is not None else None),
        import_kg_day=import_kg, flows=flows, links=links,
        truck_hours_per_day=truck_hours, n_trucks=truck_hours / 24.0,
        n_trucks_rounded=int(math.ceil(truck_hours / 24.0 - 1e-9)),
        components=components, objective_eur_year=objective,
        annual_kg=annual_kg)


def _check_feasibility(problem, x, hp, import_kg, values, tol):
    production = problem.production
    total = sum(hp.values()) + import_kg
    if abs(total - problem.total_demand_kg_day) > tol:
        raise ChainInfeasible("production does not balance demand")
    for node in problem.candidates:
        if x[node.id]:
            if not (production.cap_min_kg_day - tol <= hp[node.id]
                    <= production.cap_max_kg_day + tol):
                raise ChainInfeasible(f"capacity box violated at {node.id}")
        elif hp[node.id] > tol:
            raise ChainInfeasible(f"production without siting at {node.id}")
    sources = problem.sources
    source_hp = list(hp.values()) + ([import_kg] if problem.import_spec else [])
    n_sinks = len(problem.sinks)
    for pi in range(len(sources)):
        out = sum(float(values[problem.ht_vars[(pi, ci)]])
                  for ci in range(n_sinks))
        if out > source_hp[pi] + tol:
            raise ChainInfeasible(f"transport exceeds production at {sources[pi]}")
    for ci, sink in enumerate(problem.sinks):
        inflow = sum(float(values[problem.ht_vars[(pi, ci)]])
                     for pi in range(len(sources)))
        if inflow + tol < sink.hd_kg_per_day:
            raise ChainInfeasible(f"demand unmet at sink {sink.id}")
    binary_links = set(problem.lp.binaries)
    for key, ht in problem.ht_vars.items():
        y = problem.y_vars[key]
        if y in binary_links and float(values[ht]) > tol and values[y] < 0.5:
            raise ChainInfeasible("flow on a closed connection")


def end_use_cost(design, served_kg_per_year=None, include_stations=False):
    """Per-kilogram cost breakdown; station blocks only for transport use."""
    served = served_kg_per_year if served_kg_per_year is not None \
        else design.annual_kg
    if served <= 0:
        raise DivisionDomain("served mass must be positive")
    names = COMPONENTS if include_stations \
        else tuple(n for n in COMPONENTS if n not in ("SCC", "SOC"))
    breakdown = {name: design.components[name] / served for name in names}
    breakdown["total"] = sum(breakdown.values())
    return breakdown

"""Hydrogen consumption locations: industrial sites and fueling stations.

Industrial annual demand follows sector-specific formulas (direct-reduction
steel, Haber-Bosch ammonia, methanol synthesis, refinery hydrocracking).
The transport sector is covered by a fueling-station plan with scale- and
learning-dependent station investment costs.
"""

import math
from dataclasses import dataclass

from .errors import IncompleteSite, InvalidStationSpec, NoCandidates
from .grid import assign_to_nearest_node

LHV_KWH_PER_KG = 33.33          # lower heating value of hydrogen
M3_TO_KG = 0.0841               # normal cubic metres to kilograms
HOURS_PER_YEAR = 8760.0         # 100% plant availability
DAYS_PER_YEAR = 365.0

# sector default demand factors, kg H2 per ton of product
AMMONIA_KG_PER_TON = 177.55     # 3 mol H2 per 2 mol NH3
METHANOL_KG_PER_TON = 188.73    # 2 mol H2 per 1 mol CH3OH
STEEL_DR_KG_PER_TON = 80.0      # direct reduction route

REFINERY_M3_PER_TON = 100.0     # specific H2 demand per ton crude oil
REFINERY_OUTPUT_DECLINE = 0.8   # mineral-oil demand decline to 2030
REFINERY_NET_SHARE = 0.22       # net (externally supplied) share

# station turnover defaults, kg/day
CAR_STATION_TURNOVER = 700.0    # 1,000 kg/day capacity at 70% utilization
TRUCK_STATION_TURNOVER = 847.42
STATION_CAPACITY_KG_DAY = 1000.0

SECTORS = ("steel", "ammonia", "methanol", "refinery")
BASIS_TONS_PER_YEAR = "tons_per_year"
BASIS_KG_PER_HOUR = "kg_per_hour"
BASIS_TONS_H2_PER_YEAR = "tons_h2_per_year"

INDUSTRY = "industry"
STATION_CARS = "station_cars"
STATION_TRUCKS = "station_trucks"


@dataclass(frozen=True)
class IndustrialSite:
    name: str
    sector: str
    basis_kind: str            # one of the BASIS_* constants
    basis_value: float
    factor_kg_per_ton: float = None   # defaults to the sector factor
    deduction_kg_per_hour: float = 0.0  # on-site self supply
    x: float = 0.0
    y: float = 0.0


@dataclass(frozen=True)
class ConsumptionLocation:
    id: int
    kind: str                  # industry | station_cars | station_trucks
    hd_kg_per_day: float
    node: int = None
    x: float = 0.0
    y: float = 0.0


@dataclass(frozen=True)
class StationParams:
    alpha: float
    beta: float
    gamma: float
    ec_kwh_per_kg: float
    ngc_kwh_per_kg: float
    depreciation_years: int = 10
    o_and_m: float = 0.05


STATION_DEFAULTS = {
    "LH2": StationParams(alpha=0.6, beta=0.06, gamma=0.9,
                         ec_kwh_per_kg=0.6, ngc_kwh_per_kg=0.0),
    "GH2": StationParams(alpha=0.7, beta=0.06, gamma=0.6,
                         ec_kwh_per_kg=1.6, ngc_kwh_per_kg=0.0),
    "LOHC": StationParams(alpha=0.66, beta=0.06, gamma=1.4,
                          ec_kwh_per_kg=4.4, ngc_kwh_per_kg=11.7),
}

_SECTOR_FACTORS = {
    "steel": STEEL_DR_KG_PER_TON,
    "ammonia": AMMONIA_KG_PER_TON,
    "methanol": METHANOL_KG_PER_TON,
}


def industrial_site_demand(site):
    """Annual hydrogen demand of one industrial site in kWh/year."""
    if site.sector not in SECTORS:
        raise IncompleteSite(f"{site.name}: unknown sector {site.sector!r}")
    if site.basis_value is None or site.basis_value < 0:
        raise IncompleteSite(f"{site.name}: missing or negative output basis")

    deduction_kg = site.deduction_kg_per_hour * HOURS_PER_YEAR

    if site.sector == "refinery":
        if site.basis_kind != BASIS_TONS_PER_YEAR:
            raise IncompleteSite(f"{site.name}: refinery basis must be tons/year")
        m3_per_ton = (site.factor_kg_per_ton
                      if site.factor_kg_per_ton is not None
                      else REFINERY_M3_PER_TON)
        kg = (site.basis_value * REFINERY_OUTPUT_DECLINE * m3_per_ton
              * M3_TO_KG * REFINERY_NET_SHARE)
        return (kg - deduction_kg) * LHV_KWH_PER_KG

    if site.basis_kind == BASIS_KG_PER_HOUR:
        kg = site.basis_value * HOURS_PER_YEAR
    elif site.basis_kind == BASIS_TONS_H2_PER_YEAR:
        kg = site.basis_value * 1000.0
    elif site.basis_kind == BASIS_TONS_PER_YEAR:
        factor = (site.factor_kg_per_ton
                  if site.factor_kg_per_ton is not None
                  else _SECTOR_FACTORS.get(site.sector))
        if factor is None:
            raise IncompleteSite(f"{site.name}: no demand factor for sector")
        kg = site.basis_value * factor
    else:
        raise IncompleteSite(f"{site.name}: unknown basis kind {site.basis_kind!r}")

    net_kg = kg - deduction_kg
    if net_kg < 0:
        raise IncompleteSite(f"{site.name}: self supply exceeds demand")
    return net_kg * LHV_KWH_PER_KG


def station_count(total_kwh_per_year, turnover_kg_per_day):
    if turnover_kg_per_day <= 0:
        raise InvalidStationSpec("turnover must be positive")
    daily_kg = total_kwh_per_year / LHV_KWH_PER_KG / DAYS_PER_YEAR
    # a station count may absorb up to 1% of one station of slack, so a
    # turnover figure quoted to two decimals still yields its round count
    return int(math.ceil(daily_kg / turnover_kg_per_day - 0.01))


def plan_stations(total_kwh_per_year, turnover_kg_per_day, candidates,
                  kind=STATION_TRUCKS):
    """Place fueling stations on weighted candidate sites.

    The national station count is ceil(total daily kg / turnover); counts are
    allocated to candidates proportionally to their weights with
    largest-remainder rounding (ties: higher weight, then lower id).  Every
    station turns over exactly *turnover_kg_per_day*.
    """
    n = station_count(total_kwh_per_year, turnover_kg_per_day)
    if n == 0:
        return []
    if not candidates:
        raise NoCandidates("no station candidate sites")
    weights = [max(float(c[3]), 0.0) for c in candidates]
    total_w = sum(weights)
    if total_w <= 0:
        raise NoCandidates("candidate weights are all zero")

    quotas = [n * w / total_w for w in weights]
    counts = [int(math.floor(q)) for q in quotas]
    remainder = n - sum(counts)
    order = sorted(range(len(candidates)),
                   key=lambda i: (-(quotas[i] - counts[i]), -weights[i],
                                  candidates[i][0]))
    for i in order[:remainder]:
        counts[i] += 1

    stations = []
    sid = 0
    for (cand_id, x, y, _w), count in zip(candidates, counts):
        for _ in range(count):
            stations.append(ConsumptionLocation(
                id=sid, kind=kind, hd_kg_per_day=turnover_kg_per_day,
                x=float(x), y=float(y)))
            sid += 1
    return stations


def station_investment_cost(capacity_kg_per_day, n_stations, params):
    """Investment cost per station with scaling and learning effects.

    Collapses to 1.3 * 600,000 * gamma at the 212 kg/day, 400-station
    reference point.
    """
    if capacity_kg_per_day <= 0 or n_stations < 1:
        raise InvalidStationSpec("capacity must be > 0 and count >= 1")
    scale = (capacity_kg_per_day / 212.0) ** params.alpha
    learning_exp = math.log2(capacity_kg_per_day * n_stations / (212.0 * 400.0))
    learning = (1.0 - params.beta) ** learning_exp
    return 1.3 * 600_000.0 * params.gamma * scale * learning


def annual_kwh_to_kg_per_day(kwh_per_year):
    return kwh_per_year / LHV_KWH_PER_KG / DAYS_PER_YEAR


def build_consumption_set(industrial_sites, station_plan, nodes):
    """Anchor industry sites and planned stations to their nearest grid node.

    Total daily mass is conserved exactly relative to the inputs.
    """
    locations = []
    next_id = 0
    for site in industrial_sites:
        annual_kwh = industrial_site_demand(site)
        hd = annual_kwh_to_kg_per_day(annual_kwh)
        if hd <= 0:
            continue
        locations.append(ConsumptionLocation(
            id=next_id, kind=INDUSTRY, hd_kg_per_day=hd,
            node=assign_to_nearest_node((site.x, site.y), nodes),
            x=site.x, y=site.y))
        next_id += 1
    for station in station_plan:
        locations.append(ConsumptionLocation(
            id=next_id, kind=station.kind,
            hd_kg_per_day=station.hd_kg_per_day,
            node=assign_to_nearest_node((station.x, station.y), nodes),
            x=station.x, y=station.y))
        next_id += 1
    return locations

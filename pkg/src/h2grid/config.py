"""Study configuration.

YAML in, dataclasses out.  Unknown keys are rejected with the full key path
so typos (a classic: ``electrolyser_cost``) fail loudly instead of being
silently ignored.  Every omitted economic value falls back to the package
default, and the effective configuration can be echoed back to YAML; loading
that echo reproduces the same configuration.
"""

import dataclasses
from dataclasses import dataclass, field

import yaml

from .chain import ImportSpec, ProductionParams, TransportParams
from .errors import ConfigError

FIXTURES = ("congested10",)


@dataclass(frozen=True)
class InputPaths:
    nodes: str = None
    lines: str = None
    generators: str = None
    demand: str = None
    industrial_sites: str = None
    station_candidates: str = None
    consumption: str = None


@dataclass(frozen=True)
class SynthConfig:
    n_nodes: int = 10
    n_lines: int = 13
    congestion: float = 0.7
    mean_demand_mw: float = 180.0
    renewable_share: float = 0.55


@dataclass(frozen=True)
class ScenarioConfig:
    spatial: str = "uniform"
    temporal: str = "flat"
    carrier: str = "LH2"


@dataclass(frozen=True)
class ImportConfig:
    enabled: bool = False
    node: int = 0
    x: float = 0.0
    y: float = 0.0
    cap_kg_per_day: float = ImportSpec.cap_kg_per_day
    cost_eur_per_kg: float = ImportSpec.cost_eur_per_kg


@dataclass(frozen=True)
class StationConfig:
    cars_twh: float = 0.0
    trucks_twh: float = 0.0
    kind: str = "station_cars"


@dataclass(frozen=True)
class StudyConfig:
    hours: int = 168
    seed: int = 42
    fixture: str = None              # name of a shipped study fixture
    h2_demand_kg_day: float = 90_000.0
    ngp: float = 0.03
    cheap_share: float = 0.7
    inputs: InputPaths = InputPaths()
    synthetic: SynthConfig = None
    scenarios: tuple = (ScenarioConfig(),)
    production: ProductionParams = ProductionParams()
    transport: TransportParams = TransportParams()
    imports: ImportConfig = ImportConfig()
    stations: StationConfig = StationConfig()

    def import_spec(self):
        if not self.imports.enabled:
            return None
        return ImportSpec(node=self.imports.node, x=self.imports.x,
                          y=self.imports.y,
                          cap_kg_per_day=self.imports.cap_kg_per_day,
                          cost_eur_per_kg=self.imports.cost_eur_per_kg)


_SECTIONS = {
    "inputs": InputPaths,
    "synthetic": SynthConfig,
    "production": ProductionParams,
    "transport": TransportParams,
    "imports": ImportConfig,
    "stations": StationConfig,
}
_SCALARS = ("hours", "seed", "fixture", "h2_demand_kg_day", "ngp",
            "cheap_share")


def _build_section(cls, data, path):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping")
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in names:
            raise ConfigError(f"unknown key {path}.{key}")
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_config(data):
    """Build a StudyConfig from a parsed YAML mapping."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("top level: expected a mapping")
    kwargs = {}
    for key, value in data.items():
        if key in _SCALARS:
            kwargs[key] = value
        elif key in _SECTIONS:
            if key == "synthetic" and value is None:
                kwargs[key] = None
            else:
                kwargs[key] = _build_section(_SECTIONS[key], value, key)
        elif key == "scenarios":
            if not isinstance(value, list):
                raise ConfigError("scenarios: expected a list")
            kwargs["scenarios"] = tuple(
                _build_section(ScenarioConfig, item, f"scenarios[{i}]")
                for i, item in enumerate(value))
        else:
            raise ConfigError(f"unknown key {key}")
    cfg = StudyConfig(**kwargs)
    if cfg.fixture is not None and cfg.fixture not in FIXTURES:
        raise ConfigError(f"fixture: unknown fixture {cfg.fixture!r}; "
                          f"known: {', '.join(FIXTURES)}")
    for i, sc in enumerate(cfg.scenarios):
        if sc.spatial not in ("uniform", "nodal"):
            raise ConfigError(f"scenarios[{i}].spatial: {sc.spatial!r}")
        if sc.temporal not in ("flat", "real_time"):
            raise ConfigError(f"scenarios[{i}].temporal: {sc.temporal!r}")
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    return parse_config(data)


def effective_config(cfg):
    """The full configuration with all defaults filled in, as a mapping."""
    out = {k: getattr(cfg, k) for k in _SCALARS}
    for name in _SECTIONS:
        section = getattr(cfg, name)
        out[name] = None if section is None else dataclasses.asdict(section)
    out["scenarios"] = [dataclasses.asdict(s) for s in cfg.scenarios]
    return out


def dump_config(cfg, path):
    with open(path, "w") as fh:
        yaml.safe_dump(effective_config(cfg), fh, sort_keys=True)

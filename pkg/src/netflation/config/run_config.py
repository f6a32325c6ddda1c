"""Run configuration: defaults < YAML file < --set overrides < global flags."""

from dataclasses import dataclass, field, fields, asdict, is_dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union, get_args, get_origin, get_type_hints

import yaml

from netflation.dynamics.pricing import HazardSpec
from netflation.network.netgen import NetworkParams
from netflation.utils import read_yaml


class ConfigError(ValueError):
    """Raised for unknown, missing or mistyped configuration keys."""

    pass


@dataclass
class NetworkConfig:
    n: int = 2000
    alpha: float = 2.5
    d_min: int = 2
    d_max: int = 100
    nu: float = 0.5
    B: float = 1.0
    sectors: int = 2
    sector_affinity: float = 0.9
    nu_w: Optional[float] = None


@dataclass
class MonetaryConfig:
    pi: float = 0.02
    theta: float = 0.5
    horizon: int = 200
    m0_preset: str = "stationary"
    m0_total: float = 1.0
    update_form: str = "propagated"


@dataclass
class HazardConfig:
    g_scale: float = 0.05
    epsilon_cap: float = 0.01
    c0: float = 0.1
    c1: float = 0.6
    kappa_f: float = 0.05
    driver: str = "age"
    allow_degenerate: bool = False
    replications: int = 1


@dataclass
class StatsConfig:
    zeta: float = 1.0
    window_start: Optional[int] = None
    window_end: Optional[int] = None
    regimes: List[str] = field(default_factory=lambda: ["flexible", "sticky"])
    eta: float = 0.5
    kappa: float = 0.0


@dataclass
class EnsembleConfig:
    replications: int = 20
    max_failure_rate: float = 0.2
    sizes: List[int] = field(default_factory=lambda: [500, 1000, 2000, 4000])
    sweep_parameter: Optional[str] = None
    sweep_values: List[float] = field(default_factory=list)
    statistic: str = "omega_bar"


@dataclass
class OutputConfig:
    dir: str = "output/netflation"
    csv: bool = True
    hdf5: bool = True


@dataclass
class RunConfig:
    seed: int = 42
    jobs: int = 1
    network: NetworkConfig = field(default_factory=NetworkConfig)
    monetary: MonetaryConfig = field(default_factory=MonetaryConfig)
    hazard: HazardConfig = field(default_factory=HazardConfig)
    stats: StatsConfig = field(default_factory=StatsConfig)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def network_params(self, seed: Optional[int] = None) -> NetworkParams:
        net = self.network
        return NetworkParams(
            n=net.n,
            alpha=net.alpha,
            d_min=net.d_min,
            d_max=net.d_max,
            nu=net.nu,
            B=net.B,
            seed=self.seed if seed is None else seed,
            sectors=net.sectors,
            sector_affinity=net.sector_affinity,
            nu_w=net.nu_w,
        )

    def hazard_spec(self) -> HazardSpec:
        h = self.hazard
        return HazardSpec(
            g_scale=h.g_scale,
            epsilon_cap=h.epsilon_cap,
            c0=h.c0,
            c1=h.c1,
            kappa_f=h.kappa_f,
            driver=h.driver,
            allow_degenerate=h.allow_degenerate,
        )

    def window(self):
        if self.stats.window_start is None and self.stats.window_end is None:
            return None
        start = self.stats.window_start if self.stats.window_start is not None else max(1, self.monetary.horizon // 2)
        end = self.stats.window_end if self.stats.window_end is not None else self.monetary.horizon
        return (start, end)


SECTIONS = ("network", "monetary", "hazard", "stats", "ensemble", "output")
TOP_LEVEL = ("seed", "jobs")


def _coerce(key: str, value: Any, annotation) -> Any:
    origin = get_origin(annotation)
    if origin is Union:
        inner = [a for a in get_args(annotation) if a is not type(None)]
        if value is None or (isinstance(value, str) and value.strip().lower() in ("null", "none", "~")):
            return None
        return _coerce(key, value, inner[0])
    if origin in (list, List):
        (item_type,) = get_args(annotation) or (Any,)
        if isinstance(value, str):
            value = yaml.safe_load(value)
        if isinstance(value, (int, float, str)):
            value = [value]
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key} must be a list, got {value!r}")
        return [_coerce(key, v, item_type) for v in value]
    if annotation is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.strip().lower() in ("true", "false"):
            return value.strip().lower() == "true"
        raise ConfigError(f"{key} must be a boolean [True/False/true/false], got {value!r}")
    if annotation is int:
        if isinstance(value, bool):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        if isinstance(value, float) and value.is_integer():
            return int(value)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
    if annotation is float:
        if isinstance(value, bool):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        # YAML reads 1e-3 as a string
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {value!r}")
    if annotation is str:
        if not isinstance(value, (str, int, float)) or isinstance(value, bool):
            raise ConfigError(f"{key} must be a string, got {value!r}")
        return str(value)
    return value


def _assign(config: RunConfig, dotted: str, value: Any):
    parts = dotted.split(".")
    if len(parts) == 1:
        if parts[0] not in TOP_LEVEL:
            raise ConfigError(f"Unexpected configuration key: {dotted}")
        setattr(config, parts[0], _coerce(dotted, value, get_type_hints(RunConfig)[parts[0]]))
        return
    if len(parts) != 2 or parts[0] not in SECTIONS:
        raise ConfigError(f"Unexpected configuration key: {dotted}")
    section_name, key = parts
    section = getattr(config, section_name)
    hints = get_type_hints(type(section))
    if key not in hints:
        raise ConfigError(f"Unexpected configuration key: {dotted}")
    setattr(section, key, _coerce(dotted, value, hints[key]))


def flatten(raw: Dict[str, Any]) -> Dict[str, Any]:
    """Nested sections and flat dotted keys to one dotted mapping."""
    flat: Dict[str, Any] = {}
    for key, value in raw.items():
        key = str(key)
        if key in SECTIONS:
            if value is None:
                continue
            if not isinstance(value, dict):
                raise ConfigError(f"Section '{key}' must be a mapping")
            for inner, inner_value in value.items():
                flat[f"{key}.{inner}"] = inner_value
        else:
            flat[key] = value
    return flat


def parse_override(item: str):
    if "=" not in item:
        raise ConfigError(f"Override must look like section.key=value, got {item!r}")
    key, raw = item.split("=", 1)
    return key.strip(), yaml.safe_load(raw) if raw.strip() else None


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
    out: Optional[str] = None,
    jobs: Optional[int] = None,
) -> RunConfig:
    config = RunConfig()
    if path is not None:
        try:
            raw = read_yaml(path)
        except (FileNotFoundError, yaml.YAMLError) as e:
            raise ConfigError(str(e))
        if not isinstance(raw, dict):
            raise ConfigError(f"Configuration file {path} must hold a mapping")
        for key, value in flatten(raw).items():
            _assign(config, key, value)
    for item in overrides:
        key, value = parse_override(item)
        _assign(config, key, value)
    if seed is not None:
        config.seed = int(seed)
    if out is not None:
        config.output.dir = str(out)
    if jobs is not None:
        config.jobs = int(jobs)
    if config.jobs != -1 and config.jobs < 1:
        raise ConfigError(f"jobs must be -1 or a positive integer, got {config.jobs}")
    return config


def dump_config(config: RunConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config.to_dict(), f, sort_keys=False, default_flow_style=False)
    return path


def config_template() -> str:
    defaults = RunConfig()
    lines = [
        "# Run configuration for netflation",
        "# Every key is optional; omitted keys keep the defaults shown here.",
        "# Precedence: defaults < this file < --set section.key=value < --seed/--out/--jobs",
        "",
        f"seed: {defaults.seed}",
        f"jobs: {defaults.jobs} # use -1 to use all available CPUs",
        "",
    ]
    notes = {
        "network.nu_w": "null calibrates the tilt to the k_nn slope -nu",
        "network.sector_affinity": "within-sector weight share; 0 gives the bare tilted kernel",
        "monetary.m0_preset": "stationary, uniform, degree",
        "monetary.update_form": "propagated, direct",
        "hazard.driver": "age, gap",
        "hazard.allow_degenerate": "true admits c0 = c1 and c1 = 1",
        "stats.regimes": "flexible, sticky",
        "ensemble.sweep_parameter": "alpha, nu, theta, pi, g_scale, zeta",
    }
    for name in SECTIONS:
        lines.append(f"{name}:")
        section = getattr(defaults, name)
        for f_ in fields(section):
            value = getattr(section, f_.name)
            rendered = yaml.safe_dump(value, default_flow_style=True).strip()
            if rendered.endswith("..."):
                rendered = rendered[:-3].strip()
            note = notes.get(f"{name}.{f_.name}")
            lines.append(f"  {f_.name}: {rendered}" + (f" # {note}" if note else ""))
        lines.append("")
    return "\n".join(lines)

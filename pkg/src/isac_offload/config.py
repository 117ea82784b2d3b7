"""Flat ``key = value`` configuration files.

Scenario keys are the :class:`Scenario` field names; solver keys carry a
``ga.``, ``pso.``, ``oracle.``, ``ablation.`` or ``radar.`` prefix.  Unknown
keys are rejected so typos never silently fall back to defaults.
"""

import configparser
import hashlib
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from .ga import GaConfig
from .pso import PsoConfig
from .scenario import Scenario, ScenarioError, dbm_to_watt

BUNDLED = ("table1.cfg",)

_TUPLE_KEYS = {"ue_position": 2, "target_position": 2, "area_bounds": 4}
_INT_KEYS = {"ga.population_size", "ga.generations", "ga.rng_seed",
             "pso.swarm_size", "pso.iterations", "pso.rng_seed",
             "oracle.n_beta", "oracle.n_x", "oracle.n_y", "radar.delay"}
_STR_KEYS = {"ga.mutation_mode"}
_BOOL_KEYS = {"radar.conjugate_both"}


class ConfigError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    scenario: Scenario = field(default_factory=Scenario)
    ga: GaConfig = field(default_factory=GaConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)
    fixed_beta: float = 0.5
    fixed_xy: tuple = (500.0, 500.0)
    oracle_resolution: tuple = (101, 101, 101)
    radar_velocity: float = 0.1
    radar_delay: int = 16
    radar_conjugate_both: bool = False
    digest: str = ""


def _known_keys():
    keys = set(Scenario.field_names()) | {"tx_power_dbm"}
    keys |= {f"ga.{f.name}" for f in fields(GaConfig)}
    keys |= {f"pso.{f.name}" for f in fields(PsoConfig)}
    keys |= {"ablation.fixed_beta", "ablation.fixed_x", "ablation.fixed_y",
             "oracle.n_beta", "oracle.n_x", "oracle.n_y",
             "radar.true_velocity", "radar.delay", "radar.conjugate_both"}
    return keys


def _convert(key, raw):
    try:
        if key in _TUPLE_KEYS:
            parts = [float(p) for p in raw.replace(",", " ").split()]
            if len(parts) != _TUPLE_KEYS[key]:
                raise ValueError(f"expected {_TUPLE_KEYS[key]} numbers")
            return tuple(parts)
        if key in _INT_KEYS:
            return int(raw)
        if key in _STR_KEYS:
            return raw.strip()
        if key in _BOOL_KEYS:
            if raw.strip().lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError("expected a boolean")
            return raw.strip().lower() in ("true", "1", "yes")
        return float(raw)
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {raw!r}: {exc}") from None


def resolve_path(path):
    """Return the config path, falling back to bundled files by name."""
    p = Path(path)
    if p.is_file() or p.name not in BUNDLED:
        return p
    return Path(str(resources.files("isac_offload") / "data" / p.name))


def parse_config(text):
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                       comment_prefixes=("#", ";"),
                                       inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[top]\n" + text)
    except configparser.Error as exc:
        raise ConfigError("<file>", str(exc)) from None
    if len(parser.sections()) != 1:
        raise ConfigError(parser.sections()[1], "sections are not supported; use flat keys")
    raw = dict(parser["top"])
    known = _known_keys()
    for key in raw:
        if key not in known:
            raise ConfigError(key, "unknown configuration key")
    values = {k: _convert(k, v) for k, v in raw.items()}

    scen = {k: v for k, v in values.items() if "." not in k}
    if "tx_power_dbm" in scen:
        if "tx_power" in scen:
            raise ConfigError("tx_power_dbm", "give either tx_power or tx_power_dbm, not both")
        scen["tx_power"] = dbm_to_watt(scen.pop("tx_power_dbm"))

    def section(prefix):
        return {k.split(".", 1)[1]: v for k, v in values.items() if k.startswith(prefix + ".")}

    def build(cls, kwargs, prefix):
        try:
            return cls(**kwargs)
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ConfigError(prefix, str(exc)) from None

    cfg = RunConfig(
        scenario=build(Scenario, scen, "scenario"),
        ga=build(GaConfig, section("ga"), "ga"),
        pso=build(PsoConfig, section("pso"), "pso"),
    )
    abl = section("ablation")
    cfg.fixed_beta = abl.get("fixed_beta", cfg.fixed_beta)
    cfg.fixed_xy = (abl.get("fixed_x", cfg.fixed_xy[0]), abl.get("fixed_y", cfg.fixed_xy[1]))
    orc = section("oracle")
    cfg.oracle_resolution = (orc.get("n_beta", 101), orc.get("n_x", 101), orc.get("n_y", 101))
    if min(cfg.oracle_resolution) < 2:
        raise ConfigError("oracle", "resolution must be >= 2 along every axis")
    radar = section("radar")
    cfg.radar_velocity = radar.get("true_velocity", cfg.radar_velocity)
    cfg.radar_delay = radar.get("delay", cfg.radar_delay)
    cfg.radar_conjugate_both = radar.get("conjugate_both", cfg.radar_conjugate_both)
    cfg.digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
    return cfg


def load_config(path):
    path = resolve_path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from None
    return parse_config(text)

"""Declarative scenario configuration (INI-style ``key = value`` sections)."""
from __future__ import annotations

import configparser
import enum
import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .magnetometer import NmorResponse
from .montecarlo import RngSpec
from .polarimeter import DetectionConfig
from .psr import ChannelOrder, PhysicalParams, SqueezingTargets, DEFAULT_COUPLING


class ConfigError(Exception):
    """Malformed config file or field (CLI exit status 2)."""


class InvariantError(Exception):
    """Config parses but violates a domain invariant (CLI exit status 3)."""


class Scenario(enum.Enum):
    PHASE_SCAN = "PhaseScan"
    DENSITY_SWEEP = "DensitySweep"
    SENSITIVITY_SWEEP = "SensitivitySweep"
    MONTE_CARLO_VALIDATE = "MonteCarloValidate"
    FIT_TARGETS = "FitTargets"


@dataclass(frozen=True)
class MagnetConfig:
    slope_per_density: float = 1.0e-9
    linewidth: float = 1.0e-6
    b_amp: float = 5.0e-8
    f_mod: float = 1717.0

    def response(self, density: float) -> NmorResponse:
        return NmorResponse(self.slope_per_density, self.linewidth, density)


@dataclass(frozen=True)
class MonteCarloConfig:
    n_states: int = 50
    n_angles: int = 20
    count: int = 100_000
    duration: float = 1.0
    sample_rate: float = 1.0e5
    rbw: float = 100.0
    segments: int = 100


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario
    state_source: str = "physical"
    physical: PhysicalParams = field(default_factory=PhysicalParams)
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    magnet: MagnetConfig = field(default_factory=MagnetConfig)
    targets: SqueezingTargets = field(default_factory=lambda: SqueezingTargets(-2.0, 3.75))
    phis: tuple = tuple(np.linspace(0, np.pi, 37))
    densities: tuple = tuple(np.linspace(2.5e11, 2.5e12, 10))
    rng: RngSpec = field(default_factory=RngSpec)
    montecarlo: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    output_dir: Path = Path("out")

    def canonical(self) -> str:
        """Resolved settings as sorted ``key=value`` lines; output_dir excluded."""
        items = {
            "scenario.name": self.scenario.value,
            "scenario.state": self.state_source,
            "physical.density": self.physical.density,
            "physical.power": self.physical.power,
            "physical.coupling": self.physical.coupling,
            "physical.transmission": self.physical.transmission,
            "physical.thermal_seed_x": self.physical.thermal_seed[0],
            "physical.thermal_seed_p": self.physical.thermal_seed[1],
            "physical.channel_order": self.physical.channel_order.value,
            "detection.phi_prp": self.detection.phi_prp,
            "detection.lo_power": self.detection.lo_power,
            "detection.detector_efficiency": self.detection.detector_efficiency,
            "detection.signal_gain": self.detection.signal_gain,
            "magnet.slope_per_density": self.magnet.slope_per_density,
            "magnet.linewidth": self.magnet.linewidth,
            "magnet.b_amp": self.magnet.b_amp,
            "magnet.f_mod": self.magnet.f_mod,
            "targets.sq_db": self.targets.sq_db,
            "targets.antisq_db": self.targets.antisq_db,
            "sweep.phis": ",".join(_fmt(v) for v in self.phis),
            "sweep.densities": ",".join(_fmt(v) for v in self.densities),
            "rng.seed": self.rng.seed,
            "rng.algorithm": self.rng.algorithm_id,
            **{f"montecarlo.{k}": v for k, v in vars(self.montecarlo).items()},
        }
        return "".join(f"{k}={_fmt(v)}\n" for k, v in sorted(items.items()))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


_SCHEMA = {
    "scenario": {"name": str, "state": str},
    "physical": {
        "density": float, "power": float, "coupling": float, "transmission": float,
        "thermal_seed_x": float, "thermal_seed_p": float, "channel_order": str,
    },
    "detection": {"phi_prp": float, "lo_power": float, "detector_efficiency": float, "signal_gain": float},
    "magnet": {"slope_per_density": float, "linewidth": float, "b_amp": float, "f_mod": float},
    "targets": {"sq_db": float, "antisq_db": float},
    "sweep": {"phis": "grid", "densities": "grid"},
    "rng": {"seed": int, "algorithm": str},
    "montecarlo": {
        "n_states": int, "n_angles": int, "count": int, "duration": float,
        "sample_rate": float, "rbw": float, "segments": int,
    },
    "output": {"dir": str},
}

_LINSPACE = re.compile(r"^linspace\(\s*([^,]+),([^,]+),([^,]+)\)$")


def parse_grid(text: str) -> tuple:
    """``linspace(start, stop, n)`` or a comma-separated list of numbers."""
    text = text.strip()
    m = _LINSPACE.match(text)
    if m:
        start, stop, num = float(m[1]), float(m[2]), int(m[3])
        return tuple(float(v) for v in np.linspace(start, stop, num))
    return tuple(float(v) for v in text.split(",") if v.strip())


def _convert(section: str, key: str, raw: str, kind):
    try:
        if kind == "grid":
            return parse_grid(raw)
        if kind is int:
            return int(raw, 0)
        return kind(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None


def _line_of(path: Path, section: str, key: str) -> str:
    current = None
    for i, line in enumerate(path.read_text().splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
        elif current == section and re.match(rf"^{re.escape(key)}\s*[=:]", s):
            return f"line {i}: "
    return ""


def load(path) -> ScenarioConfig:
    """Parse and fully validate a config file.

    Raises ``ConfigError`` for syntax, unknown keys and unparsable values,
    and ``InvariantError`` when a parsed value breaks a domain invariant.
    """
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except configparser.ParsingError as exc:
        where = "; ".join(f"line {n}: cannot parse {text.strip()!r}" for n, text in exc.errors) or str(exc)
        raise ConfigError(f"{path}: {where}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    values: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{path}: {_line_of(path, section, key)}unknown key [{section}] {key}")
            try:
                values[section][key] = _convert(section, key, raw, _SCHEMA[section][key])
            except ConfigError as exc:
                raise ConfigError(f"{path}: {_line_of(path, section, key)}{exc}") from None
    return build(values)


def build(values: dict) -> ScenarioConfig:
    get = lambda s, k, d: values.get(s, {}).get(k, d)  # noqa: E731
    name = get("scenario", "name", None)
    if name is None:
        raise ConfigError("missing required field [scenario] name")
    try:
        scenario = Scenario(name)
    except ValueError:
        raise ConfigError(
            f"[scenario] name = {name!r}: expected one of {[s.value for s in Scenario]}"
        ) from None
    state_source = get("scenario", "state", "physical")
    if state_source not in ("physical", "fitted"):
        raise ConfigError(f"[scenario] state = {state_source!r}: expected 'physical' or 'fitted'")
    order = get("physical", "channel_order", ChannelOrder.SHEAR_THEN_LOSS.value)
    try:
        order = ChannelOrder(order)
    except ValueError:
        raise ConfigError(
            f"[physical] channel_order = {order!r}: expected one of {[o.value for o in ChannelOrder]}"
        ) from None

    d = ScenarioConfig(scenario=scenario)
    mc_defaults = MonteCarloConfig()
    try:
        cfg = ScenarioConfig(
            scenario=scenario,
            state_source=state_source,
            physical=PhysicalParams(
                density=get("physical", "density", 0.0),
                power=get("physical", "power", 4.0),
                coupling=get("physical", "coupling", DEFAULT_COUPLING),
                transmission=get("physical", "transmission", 1.0),
                thermal_seed=(get("physical", "thermal_seed_x", 0.0), get("physical", "thermal_seed_p", 0.0)),
                channel_order=order,
            ),
            detection=DetectionConfig(
                phi_prp=get("detection", "phi_prp", 0.0),
                lo_power=get("detection", "lo_power", 4.0),
                detector_efficiency=get("detection", "detector_efficiency", 1.0),
                signal_gain=get("detection", "signal_gain", 1.0e4),
            ),
            magnet=MagnetConfig(**values.get("magnet", {})),
            targets=SqueezingTargets(get("targets", "sq_db", -2.0), get("targets", "antisq_db", 3.75)),
            phis=get("sweep", "phis", d.phis),
            densities=get("sweep", "densities", d.densities),
            rng=RngSpec(get("rng", "seed", 0), get("rng", "algorithm", "PCG64")),
            montecarlo=MonteCarloConfig(**{**vars(mc_defaults), **values.get("montecarlo", {})}),
            output_dir=Path(get("output", "dir", "out")),
        )
    except ValueError as exc:
        raise InvariantError(str(exc)) from None
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    """Check every embedded invariant before any computation runs."""
    try:
        cfg.physical.check()
        cfg.detection.check()
        cfg.magnet.response(cfg.physical.density).check()
        if cfg.scenario is Scenario.FIT_TARGETS or cfg.state_source == "fitted":
            cfg.targets.check()
    except ValueError as exc:
        raise InvariantError(str(exc)) from None
    if not cfg.phis:
        raise InvariantError("sweep grid phis is empty")
    if not cfg.densities:
        raise InvariantError("sweep grid densities is empty")
    if cfg.scenario is Scenario.DENSITY_SWEEP:
        if any(n < 0 for n in cfg.densities) or list(cfg.densities) != sorted(cfg.densities):
            raise InvariantError("densities must be non-negative and ascending")
    if cfg.scenario is Scenario.SENSITIVITY_SWEEP:
        ds = cfg.densities
        if any(n <= 0 for n in ds) or any(b <= a for a, b in zip(ds, ds[1:])):
            raise InvariantError("densities must be positive and strictly ascending")
    mc = cfg.montecarlo
    if min(mc.n_states, mc.n_angles, mc.count, mc.segments) < 1:
        raise InvariantError("montecarlo counts must be >= 1")
    if not (mc.duration > 0 and mc.sample_rate > 0 and mc.rbw > 0):
        raise InvariantError("montecarlo duration, sample_rate and rbw must be > 0")

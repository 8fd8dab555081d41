"""Scenario and sweep configuration: dataclasses, defaults, file and override parsing.

Config files are TOML or JSON with the layout::

    bandwidth_hz = 1e6
    cad_target_slope = -3.1e-16
    [medium]        # RamanMediumParams fields
    [cavity]        # CavityConfig fields
    [perturbation]  # PerturbationModel fields
    [detection]     # DetectionParams fields
    [sweep]         # only read by the sweep command

Unknown keys are rejected. Precedence is override > file > built-in default.
"""

from dataclasses import dataclass, fields, replace, asdict
import hashlib
import json
import math
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .cavity import CavityConfig, PerturbationModel
from .errors import ConfigError
from .medium import RamanMediumParams
from .noise import DetectionParams

SECTIONS = {
    "medium": RamanMediumParams,
    "cavity": CavityConfig,
    "perturbation": PerturbationModel,
    "detection": DetectionParams,
}

F_MODES = ("bandwidth", "perturbation")
CAD_KNOBS = ("separation", "rabi_scale", "off")

DEFAULTS = {
    "bandwidth_hz": 1e6,
    "cad_target_slope": -3.1e-16,
    "cad_knob": "separation",
    "probe_offset": 0.0,
    "f_mode": "bandwidth",
    "flat_index": False,
    "medium": {
        "coupling_A": 1.197495233e-10,
        "omega1_rabi": 6283185307.179586,
        "omega2_rabi": 6283185307.179586,
        "omega_res1": 2433033905000000.0,
        "pump_separation": 6067810034378.21,
        "gamma": 1256637061435.9172,
    },
    "cavity": {
        "length_L": 0.10000058117961409,
        "mode_index": 258011,
        "linewidth_hz": 1e5,
        "n0": 1.0,
        "omega0": 2.43e15,
    },
    "perturbation": {
        "sigma": 1e-6,
        "delta_S": 1e-4,
    },
    "detection": {
        "photon_rate": 1e15,
        "quantum_eff": 0.8,
        "cavity_linewidth_hz": 1e5,
        "integration_time_s": 1.0,
    },
}

SWEEP_KEYS = ("axis", "values", "linspace", "logspace", "outputs")

TOP_LEVEL_TYPES = {
    "bandwidth_hz": float,
    "cad_target_slope": "optional_float",
    "cad_knob": str,
    "probe_offset": float,
    "f_mode": str,
    "flat_index": bool,
}

KEY_HELP = {
    "bandwidth_hz": "band (Hz) over which the second dispersion is maximised",
    "cad_target_slope": "centre dn/domega to tune to (s/rad); 'none' disables tuning",
    "cad_knob": "tuning knob: separation | rabi_scale | off",
    "probe_offset": "evaluation point relative to the doublet centre (rad/s)",
    "f_mode": "fractional bandwidth f: bandwidth (2 pi B / omega0) | perturbation (beat0 / omega0)",
    "flat_index": "zero all dispersion (debug)",
    "medium.coupling_A": "lumped susceptibility prefactor (s/rad)",
    "medium.omega1_rabi": "first pump Rabi frequency (rad/s)",
    "medium.omega2_rabi": "second pump Rabi frequency (rad/s)",
    "medium.omega_res1": "first gain-line frequency (rad/s)",
    "medium.pump_separation": "gain-line separation (rad/s)",
    "medium.gamma": "Raman linewidth (rad/s)",
    "cavity.length_L": "mirror separation (m)",
    "cavity.mode_index": "longitudinal mode number",
    "cavity.linewidth_hz": "cavity resonance linewidth (Hz)",
    "cavity.n0": "nominal mean index",
    "cavity.omega0": "nominal carrier (rad/s)",
    "perturbation.sigma": "dn/dS (index per S-unit)",
    "perturbation.delta_S": "applied perturbation (S-units)",
    "detection.photon_rate": "photons per second at the detector",
    "detection.quantum_eff": "detector quantum efficiency",
    "detection.cavity_linewidth_hz": "linewidth entering the shot-noise floor (Hz)",
    "detection.integration_time_s": "integration time (s)",
}

SWEEP_KEY_HELP = {
    "sweep.axis": "dotted scenario key to vary",
    "sweep.values": "explicit list of axis values",
    "sweep.linspace": "[start, stop, num] alternative to values",
    "sweep.logspace": "[start, stop, num] (endpoints, not exponents)",
    "sweep.outputs": "report fields to tabulate",
}


@dataclass(frozen=True)
class ScenarioConfig:
    medium: RamanMediumParams
    cavity: CavityConfig
    perturbation: PerturbationModel
    detection: DetectionParams
    bandwidth_hz: float = 1e6
    cad_target_slope: float = None
    cad_knob: str = "separation"
    probe_offset: float = 0.0
    f_mode: str = "bandwidth"
    flat_index: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.bandwidth_hz) and self.bandwidth_hz > 0):
            raise ConfigError("bandwidth_hz", f"must be finite and > 0, got {self.bandwidth_hz!r}")
        if self.cad_knob not in CAD_KNOBS:
            raise ConfigError("cad_knob", f"must be one of {CAD_KNOBS}, got {self.cad_knob!r}")
        if self.f_mode not in F_MODES:
            raise ConfigError("f_mode", f"must be one of {F_MODES}, got {self.f_mode!r}")
        if not math.isfinite(self.probe_offset):
            raise ConfigError("probe_offset", "must be finite")

    @property
    def tunes(self):
        return self.cad_target_slope is not None and self.cad_knob != "off"

    def to_dict(self):
        return asdict(self)

    def digest(self):
        return config_digest(self.to_dict())

    def with_value(self, path, value):
        """Copy with the numeric field at dotted ``path`` set to ``value``."""
        data = self.to_dict()
        _set_path(data, path, _coerce(path, value))
        return scenario_from_dict(data)


@dataclass(frozen=True)
class SweepSpec:
    base: ScenarioConfig
    axis: str
    values: tuple
    outputs: tuple

    def __post_init__(self):
        kind = key_type(self.axis)
        if kind not in (float, int, "optional_float"):
            raise ConfigError("sweep.axis", f"{self.axis!r} is not a numeric field")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ConfigError("sweep.values", "must be non-empty")
        if not all(math.isfinite(v) for v in values):
            raise ConfigError("sweep.values", "must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "outputs", tuple(self.outputs))

    def digest(self):
        return config_digest(
            {"base": self.base.to_dict(), "axis": self.axis, "values": list(self.values), "outputs": list(self.outputs)}
        )


def config_digest(data):
    text = json.dumps(data, sort_keys=True, separators=(",", ":"), default=repr)
    return hashlib.sha256(text.encode()).hexdigest()


def all_keys():
    """Every dotted scenario key with its type."""
    keys = dict(TOP_LEVEL_TYPES)
    for section, cls in SECTIONS.items():
        for fld in fields(cls):
            keys[f"{section}.{fld.name}"] = fld.type
    return keys


def key_type(path):
    keys = all_keys()
    if path not in keys:
        raise ConfigError(path, "unknown configuration key")
    return keys[path]


def _coerce(path, value):
    kind = key_type(path)
    try:
        if kind == "optional_float":
            if value is None or (isinstance(value, str) and value.strip().lower() in ("none", "null", "")):
                return None
            return float(value)
        if kind is bool:
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered not in ("true", "false", "1", "0"):
                    raise ValueError(value)
                return lowered in ("true", "1")
            return bool(value)
        if kind is int:
            number = float(value)
            if number != int(number):
                raise ValueError(value)
            return int(number)
        if kind is float:
            if isinstance(value, bool):
                raise ValueError(value)
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"cannot interpret {value!r} as {getattr(kind, '__name__', kind)}") from None


def _set_path(data, path, value):
    head, _, tail = path.partition(".")
    if tail:
        data[head][tail] = value
    else:
        data[head] = value


def default_dict():
    return json.loads(json.dumps(DEFAULTS))


def load_file(path):
    """Parse a TOML or JSON config file into a plain dict."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"invalid JSON: {exc}") from None
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"invalid TOML: {exc}") from None


def merge(base, update):
    """Overlay ``update`` on ``base``, rejecting unknown keys."""
    merged = json.loads(json.dumps(base))
    for key, value in update.items():
        if key == "sweep":
            if not isinstance(value, dict):
                raise ConfigError("sweep", "must be a table")
            for sub in value:
                if sub not in SWEEP_KEYS:
                    raise ConfigError(f"sweep.{sub}", "unknown configuration key")
            merged["sweep"] = dict(value)
        elif key in SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(key, "must be a table")
            for sub, subvalue in value.items():
                merged[key][sub] = _coerce(f"{key}.{sub}", subvalue)
        elif key in TOP_LEVEL_TYPES:
            merged[key] = _coerce(key, value)
        else:
            raise ConfigError(key, "unknown configuration key")
    return merged


def apply_overrides(data, overrides):
    """Apply ``KEY=VALUE`` strings (dotted keys) to a config dict."""
    data = json.loads(json.dumps(data))
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(key or item, "override must look like KEY=VALUE")
        if key.startswith("sweep."):
            sub = key[len("sweep."):]
            if sub not in SWEEP_KEYS:
                raise ConfigError(key, "unknown configuration key")
            data.setdefault("sweep", {})[sub] = _parse_sweep_value(sub, raw)
            continue
        _set_path(data, key, _coerce(key, raw.strip()))
    return data


def _parse_sweep_value(sub, raw):
    if sub == "axis":
        return raw.strip()
    items = [item.strip() for item in raw.strip().strip("[]").split(",") if item.strip()]
    if sub == "outputs":
        return items
    try:
        return [float(item) for item in items]
    except ValueError:
        raise ConfigError(f"sweep.{sub}", f"cannot parse {raw!r} as numbers") from None


def resolve(config_path=None, overrides=()):
    """Built-in defaults, overlaid with the file, overlaid with overrides."""
    data = default_dict()
    if config_path is not None:
        data = merge(data, load_file(config_path))
    return apply_overrides(data, overrides)


def scenario_from_dict(data):
    kwargs = {}
    for section, cls in SECTIONS.items():
        values = data.get(section, {})
        known = {fld.name for fld in fields(cls)}
        for key in values:
            if key not in known:
                raise ConfigError(f"{section}.{key}", "unknown configuration key")
        missing = known - set(values)
        if missing:
            raise ConfigError(f"{section}.{sorted(missing)[0]}", "missing")
        kwargs[section] = cls(**{k: _coerce(f"{section}.{k}", v) for k, v in values.items()})
    for key in TOP_LEVEL_TYPES:
        if key in data:
            kwargs[key] = _coerce(key, data[key])
    for key in data:
        if key not in kwargs and key != "sweep":
            raise ConfigError(key, "unknown configuration key")
    return ScenarioConfig(**kwargs)


def sweep_from_dict(data, outputs_allowed):
    """Build a SweepSpec from a resolved config dict containing a [sweep] table."""
    base = scenario_from_dict(data)
    sweep = data.get("sweep")
    if not sweep:
        raise ConfigError("sweep", "missing [sweep] table")
    if "axis" not in sweep:
        raise ConfigError("sweep.axis", "missing")
    given = [k for k in ("values", "linspace", "logspace") if k in sweep]
    if len(given) != 1:
        raise ConfigError("sweep.values", "give exactly one of values, linspace, logspace")
    kind = given[0]
    if kind == "values":
        values = sweep["values"]
    else:
        try:
            start, stop, num = sweep[kind]
            num = int(num)
        except (TypeError, ValueError):
            raise ConfigError(f"sweep.{kind}", "must be [start, stop, num]") from None
        values = np.linspace(start, stop, num) if kind == "linspace" else np.geomspace(start, stop, num)
    outputs = list(sweep.get("outputs", []))
    for name in outputs:
        if name not in outputs_allowed:
            raise ConfigError("sweep.outputs", f"unknown report field {name!r}")
    try:
        values = [float(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError("sweep.values", "must be numbers") from None
    return SweepSpec(base, sweep["axis"], tuple(values), tuple(outputs))


def default_scenario():
    return scenario_from_dict(default_dict())

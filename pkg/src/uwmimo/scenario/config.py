"""Flat ``key = value`` scenario configuration.

One setting per line, ``#`` starts a comment.  Lists are comma separated.
Every key of :class:`ScenarioConfig` is optional in a file; missing keys
keep their defaults, unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import math
import typing
from dataclasses import dataclass, fields
from importlib import resources

from ..acoustic_channel import SOUND_SPEED_MPS, constant_absorption, thorp_absorption
from ..mimo_analysis import StbcModel
from ..sync_protocol import MediumParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    # Monte-Carlo
    trials: int = 100
    rng_seed: int = 2024

    # crystal and the two media
    crystal_hz: float = 100e3
    mi_frequency_hz: float = 10e6
    mi_bandwidth_hz: float = 20e3
    mi_speed_mps: float = 3.33e7
    acoustic_frequency_hz: float = 10e3
    acoustic_bandwidth_hz: float = 10e3
    acoustic_speed_mps: float = SOUND_SPEED_MPS

    # synchronization round
    uplink_bits: int = 100
    downlink_bits: int = 200
    sync_nodes: int = 10
    sync_distance_m: float = 20.0
    estimation_error_sweep_hz: tuple = (0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0, 450.0, 500.0)
    estimation_error_std_hz: float = 200.0

    # deployment
    n_slaves: int = 5
    radius_m: float = 10.0
    min_spacing_m: float = 0.5
    bs_depth_m: float = 5.0
    bs_offset_m: float = 0.0

    # multipath
    path_excess_m: tuple = (0.0, 2.0, 5.0)
    reflection_loss: float = 4.0
    spreading_exponent: float = 1.5
    absorption: str = "thorp"

    # link budget and analysis
    tx_power_mw: float = 10.0
    noise_power_mw: float = 9.81e-3
    snr_threshold_db: float = 25.0
    doppler_scale: float = 1e-4
    csi_bits: int = 200
    stbc_model: str = "coherent"
    trace_duration_s: float = 1.5
    trace_step_s: float = 1e-3
    min_nodes: int = 2
    max_nodes: int = 20
    time_step_s: float = 1e-3

    # baseband BER sweep
    ber_distances_m: tuple = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
    ber_carrier_hz: float = 100e3
    ber_tx_spacing_m: float = 0.3
    ber_path_excess_m: tuple = (0.0, 0.3, 0.7)
    ber_reference_snr_db: float = -2.0
    ber_noise: bool = True
    ber_payload_bits: int = 1000
    ber_trials: int = 100
    ber_pilot_length: int = 64
    ber_bf_estimate_symbols: int = 2
    ber_rx_cfo_max_hz: float = 50.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            kind = _field_kind(f)
            if kind is float and not math.isfinite(value):
                raise ConfigError(f"{f.name} must be finite")
            if kind is tuple and not all(math.isfinite(v) for v in value):
                raise ConfigError(f"{f.name} must hold finite numbers")
        positive = [
            "crystal_hz", "mi_frequency_hz", "mi_bandwidth_hz", "mi_speed_mps", "acoustic_frequency_hz",
            "acoustic_bandwidth_hz", "acoustic_speed_mps", "sync_distance_m", "radius_m", "tx_power_mw",
            "noise_power_mw", "doppler_scale", "trace_duration_s", "trace_step_s", "time_step_s",
            "reflection_loss", "ber_carrier_hz", "ber_tx_spacing_m",
        ]
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        at_least_one = ["trials", "sync_nodes", "min_nodes", "ber_payload_bits",
                        "ber_trials", "ber_pilot_length", "ber_bf_estimate_symbols"]
        for name in at_least_one:
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        non_negative = ["uplink_bits", "downlink_bits", "n_slaves", "min_spacing_m", "bs_depth_m",
                        "spreading_exponent", "csi_bits", "estimation_error_std_hz", "ber_rx_cfo_max_hz"]
        for name in non_negative:
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.max_nodes < self.min_nodes:
            raise ConfigError("max_nodes must be >= min_nodes")
        if any(v < 0 for v in self.estimation_error_sweep_hz) or not self.estimation_error_sweep_hz:
            raise ConfigError("estimation_error_sweep_hz needs non-negative values")
        if not self.path_excess_m or not self.ber_path_excess_m:
            raise ConfigError("at least one path is required")
        if any(v < 0 for v in self.path_excess_m + self.ber_path_excess_m):
            raise ConfigError("path excess lengths must be non-negative")
        if not self.ber_distances_m or any(v <= 0 for v in self.ber_distances_m):
            raise ConfigError("ber_distances_m needs positive values")
        if self.ber_payload_bits % 2:
            raise ConfigError("ber_payload_bits must be even (Alamouti pairs)")
        try:
            StbcModel(self.stbc_model)
        except ValueError:
            raise ConfigError(f"stbc_model must be one of {[m.value for m in StbcModel]}") from None
        if self.absorption != "thorp":
            try:
                value = float(self.absorption)
                if not (math.isfinite(value) and value >= 0):
                    raise ConfigError("absorption must be 'thorp' or a non-negative number (1/m)")
            except ValueError:
                raise ConfigError("absorption must be 'thorp' or a number (1/m)") from None

    # derived objects

    @property
    def mi_medium(self):
        return MediumParams.from_crystal(self.mi_bandwidth_hz, self.mi_speed_mps, self.mi_frequency_hz, self.crystal_hz)

    @property
    def acoustic_medium(self):
        return MediumParams.from_crystal(
            self.acoustic_bandwidth_hz, self.acoustic_speed_mps, self.acoustic_frequency_hz, self.crystal_hz
        )

    def absorption_model(self):
        if self.absorption == "thorp":
            return thorp_absorption
        return constant_absorption(float(self.absorption))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @classmethod
    def default(cls):
        """The shipped calibration (``default.cfg``)."""
        text = resources.files("uwmimo.scenario").joinpath("default.cfg").read_text()
        return parse_config(text)


_HINTS = typing.get_type_hints(ScenarioConfig)


def _field_kind(f):
    return _HINTS[f.name]


def _parse_value(name, raw):
    kind = _HINTS[name]
    raw = raw.strip()
    try:
        if kind is bool:
            low = raw.lower()
            if low not in ("true", "false"):
                raise ValueError(raw)
            return low == "true"
        if kind is int:
            try:
                return int(raw)
            except ValueError:
                value = float(raw)  # accept "1e3"
                if value != int(value):
                    raise
                return int(value)
        if kind is float:
            return float(raw)
        if kind is tuple:
            return tuple(float(v) for v in raw.split(",") if v.strip())
        return raw
    except (ValueError, OverflowError):
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def _render_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


def parse_assignments(lines, base=None):
    """Apply ``key = value`` lines on top of ``base`` (defaults if None)."""
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _HINTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    base = base or ScenarioConfig()
    return dataclasses.replace(base, **values)


def parse_config(text, base=None):
    return parse_assignments(text.splitlines(), base)


def render_config(config):
    return "".join(f"{f.name} = {_render_value(getattr(config, f.name))}\n" for f in fields(config))


def load_config(path=None, overrides=()):
    """Shipped defaults, then the file at ``path``, then ``key=value`` overrides."""
    config = ScenarioConfig.default()
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            config = parse_config(fh.read(), config)
    if overrides:
        config = parse_assignments(overrides, config)
    return config

"""Run configuration: JSON schema, defaults, and unit conversions.

The configuration file is strict JSON with a versioned schema (``version: 1``);
unknown fields are rejected by name. Power-like quantities accept either a
linear field or an explicitly suffixed dB field (``*_db`` / ``*_dbm``), never
both. An empty file (or no file) yields the default scenario:

32 antennas at half-wavelength spacing, 60 GHz carrier, 50 MHz bandwidth,
37 dBm transmit power, receiver at 100 degrees / 30 m with combined gain 8,
eavesdropper at 95 degrees / 10 m with combined gain 32, path-loss exponent
2, thermal noise (-174 dBm/Hz over the bandwidth) at both endpoints, subset
size 24, 10^5 symbols per point, seed 1, random remainder split.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .array_model import (
    SPEED_OF_LIGHT,
    ArrayConfig,
    LinkParams,
    Scenario,
    TwoRayLink,
    free_space_path_loss,
    two_ray_phase,
    two_ray_power_gain,
)
from .precoding import SPLIT_MODES
from .simulator import SCHEMES

__all__ = [
    "SWEEP_KINDS",
    "ConfigError",
    "RunConfig",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
    "watts_to_dbm",
    "thermal_noise_w",
    "build_run_config",
    "default_scenario",
    "default_run_config",
    "load_raw",
    "load_config",
]

SWEEP_KINDS = ("angle", "subset-size", "variance-profile", "single-point")

DEFAULTS = {
    "n_t": 32,
    "d_over_lambda": 0.5,
    "carrier_hz": 60e9,
    "bandwidth_hz": 50e6,
    "tx_power_dbm": 37.0,
    "path_loss_exponent": 2.0,
    "receiver_angle_deg": 100.0,
    "receiver_distance_m": 30.0,
    "receiver_combined_gain": 8.0,
    "eavesdropper_angle_deg": 95.0,
    "eavesdropper_distance_m": 10.0,
    "eavesdropper_combined_gain": 32.0,
    "m": 24,
    "k_symbols": 100_000,
    "seed": 1,
}


class ConfigError(ValueError):
    """Configuration file violates the schema; the message names the field."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(linear: float) -> float:
    return 10.0 * math.log10(linear)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def thermal_noise_w(bandwidth_hz: float) -> float:
    """Thermal noise power over a bandwidth: -174 dBm/Hz + 10*log10(B)."""
    return dbm_to_watts(-174.0 + 10.0 * math.log10(bandwidth_hz))


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved experiment description."""

    scenario: Scenario
    scheme: str
    m: int
    k_symbols: int
    seed: int
    split: str
    sweep_kind: str
    grid: tuple[float, ...]
    output_path: Path

    def canonical_dict(self) -> dict:
        """Everything that determines the results, in linear units.

        Excludes ``output_path`` on purpose: the hash identifies the
        experiment, not its destination.
        """
        def link(p: LinkParams) -> dict:
            return {
                "angle_deg": p.angle_deg,
                "tx_power_w": p.tx_power_w,
                "path_loss": p.path_loss,
                "combined_rx_gain": p.combined_rx_gain,
                "noise_power_w": p.noise_power_w,
            }

        return {
            "version": 1,
            "array": {
                "n_t": self.scenario.array.n_t,
                "d_over_lambda": self.scenario.array.d_over_lambda,
                "wavelength_m": self.scenario.array.wavelength_m,
            },
            "receiver": link(self.scenario.receiver),
            "eavesdropper": link(self.scenario.eavesdropper),
            "scheme": self.scheme,
            "m": self.m,
            "k_symbols": self.k_symbols,
            "seed": self.seed,
            "split": self.split,
            "sweep": {"kind": self.sweep_kind, "grid": list(self.grid)},
        }

    def config_hash(self) -> str:
        payload = json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


def _reject_unknown(section: dict, allowed: set[str], path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown field '{path}{key}'")


def _typed(section: dict, key: str, kinds, path: str, default=None):
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise ConfigError(f"field '{path}{key}' has wrong type: {value!r}")
    return value


def _number(section, key, path, default=None):
    return _typed(section, key, (int, float), path, default)


def _either(
    section: dict, linear_key: str, db_key: str, path: str, convert, default: float
) -> float:
    """Resolve a linear field with its dB-suffixed alternative (exclusive)."""
    if linear_key in section and db_key in section:
        raise ConfigError(f"fields '{path}{linear_key}' and '{path}{db_key}' are exclusive")
    if linear_key in section:
        return float(_number(section, linear_key, path))
    if db_key in section:
        return convert(float(_number(section, db_key, path)))
    return default


def _build_link(
    section: dict,
    path: str,
    *,
    angle_default: float,
    distance_default: float,
    gain_default: float,
    tx_power_w: float,
    wavelength_m: float,
    exponent: float,
    noise_default_w: float,
) -> LinkParams:
    allowed = {
        "angle_deg", "distance_m",
        "path_loss", "path_loss_db",
        "combined_rx_gain", "combined_rx_gain_db",
        "noise_power_w", "noise_power_dbm",
        "two_ray",
    }
    _reject_unknown(section, allowed, path)
    distance = float(_number(section, "distance_m", path, distance_default))
    path_loss = _either(
        section, "path_loss", "path_loss_db", path, db_to_linear,
        free_space_path_loss(distance, wavelength_m, exponent),
    )
    two_ray = _typed(section, "two_ray", dict, path, None)
    if "combined_rx_gain" in section or "combined_rx_gain_db" in section:
        gain = _either(
            section, "combined_rx_gain", "combined_rx_gain_db", path, db_to_linear, gain_default
        )
    elif two_ray is not None:
        sub = path + "two_ray."
        _reject_unknown(two_ray, {"h_t_m", "h_r_m", "rx_array_gain"}, sub)
        for key in ("h_t_m", "h_r_m", "rx_array_gain"):
            if key not in two_ray:
                raise ConfigError(f"missing field '{sub}{key}'")
        geometry = TwoRayLink(
            h_t_m=float(_number(two_ray, "h_t_m", sub)),
            h_r_m=float(_number(two_ray, "h_r_m", sub)),
            distance_m=distance,
            path_loss_exponent=exponent,
        )
        gain = two_ray_power_gain(two_ray_phase(geometry, wavelength_m)) * float(
            _number(two_ray, "rx_array_gain", sub)
        )
    else:
        gain = gain_default
    try:
        return LinkParams(
            angle_deg=float(_number(section, "angle_deg", path, angle_default)),
            tx_power_w=tx_power_w,
            path_loss=path_loss,
            combined_rx_gain=gain,
            noise_power_w=_either(
                section, "noise_power_w", "noise_power_dbm", path, dbm_to_watts, noise_default_w
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"in section '{path.rstrip('.')}': {exc}") from exc


def _default_grid(kind: str, scenario: Scenario) -> tuple[float, ...]:
    if kind in ("angle", "variance-profile"):
        return tuple(0.5 * k for k in range(1, 360))
    if kind == "subset-size":
        return tuple(float(m) for m in range(4, scenario.array.n_t, 4))
    return (scenario.eavesdropper.angle_deg,)


def build_run_config(raw: dict) -> RunConfig:
    """Validate a parsed JSON object and resolve it against the defaults."""
    if not isinstance(raw, dict):
        raise ConfigError(f"top level must be a JSON object, got {type(raw).__name__}")
    allowed = {
        "version", "array", "receiver", "eavesdropper",
        "tx_power_w", "tx_power_dbm", "bandwidth_mhz", "path_loss_exponent",
        "scheme", "m", "k_symbols", "seed", "split", "sweep", "output_path",
    }
    _reject_unknown(raw, allowed, "")
    version = _typed(raw, "version", int, "", 1)
    if version != 1:
        raise ConfigError(f"unsupported config version {version}, expected 1")

    array_raw = _typed(raw, "array", dict, "", {})
    _reject_unknown(array_raw, {"n_t", "d_over_lambda", "carrier_frequency_ghz", "wavelength_m"}, "array.")
    if "carrier_frequency_ghz" in array_raw and "wavelength_m" in array_raw:
        raise ConfigError("fields 'array.carrier_frequency_ghz' and 'array.wavelength_m' are exclusive")
    if "wavelength_m" in array_raw:
        wavelength = float(_number(array_raw, "wavelength_m", "array."))
    else:
        carrier = _number(array_raw, "carrier_frequency_ghz", "array.", DEFAULTS["carrier_hz"] / 1e9)
        wavelength = SPEED_OF_LIGHT / (float(carrier) * 1e9)
    try:
        array = ArrayConfig(
            n_t=_typed(array_raw, "n_t", int, "array.", DEFAULTS["n_t"]),
            d_over_lambda=float(
                _number(array_raw, "d_over_lambda", "array.", DEFAULTS["d_over_lambda"])
            ),
            wavelength_m=wavelength,
        )
    except ValueError as exc:
        raise ConfigError(f"in section 'array': {exc}") from exc

    tx_power_w = _either(
        raw, "tx_power_w", "tx_power_dbm", "", dbm_to_watts,
        dbm_to_watts(DEFAULTS["tx_power_dbm"]),
    )
    bandwidth_hz = float(_number(raw, "bandwidth_mhz", "", DEFAULTS["bandwidth_hz"] / 1e6)) * 1e6
    if bandwidth_hz <= 0:
        raise ConfigError("field 'bandwidth_mhz' must be positive")
    exponent = float(_number(raw, "path_loss_exponent", "", DEFAULTS["path_loss_exponent"]))
    noise_w = thermal_noise_w(bandwidth_hz)

    receiver = _build_link(
        _typed(raw, "receiver", dict, "", {}), "receiver.",
        angle_default=DEFAULTS["receiver_angle_deg"],
        distance_default=DEFAULTS["receiver_distance_m"],
        gain_default=DEFAULTS["receiver_combined_gain"],
        tx_power_w=tx_power_w, wavelength_m=array.wavelength_m,
        exponent=exponent, noise_default_w=noise_w,
    )
    eavesdropper = _build_link(
        _typed(raw, "eavesdropper", dict, "", {}), "eavesdropper.",
        angle_default=DEFAULTS["eavesdropper_angle_deg"],
        distance_default=DEFAULTS["eavesdropper_distance_m"],
        gain_default=DEFAULTS["eavesdropper_combined_gain"],
        tx_power_w=tx_power_w, wavelength_m=array.wavelength_m,
        exponent=exponent, noise_default_w=noise_w,
    )
    scenario = Scenario(array=array, receiver=receiver, eavesdropper=eavesdropper)

    scheme = _typed(raw, "scheme", str, "", "proposed")
    if scheme not in SCHEMES:
        raise ConfigError(f"field 'scheme' must be one of {SCHEMES}, got {scheme!r}")
    split = _typed(raw, "split", str, "", "random")
    if split not in SPLIT_MODES:
        raise ConfigError(f"field 'split' must be one of {SPLIT_MODES}, got {split!r}")
    m = _typed(raw, "m", int, "", DEFAULTS["m"])
    if not 1 <= m <= array.n_t:
        raise ConfigError(f"field 'm' must satisfy 1 <= m <= n_t={array.n_t}, got {m}")
    if scheme == "proposed" and (array.n_t - m) % 2 != 0:
        raise ConfigError(
            f"field 'm': n_t - m = {array.n_t - m} is odd, so the remainder cannot be "
            "split into equal halves and the receiver-angle cancellation is impossible"
        )
    k_symbols = _typed(raw, "k_symbols", int, "", DEFAULTS["k_symbols"])
    if k_symbols < 1:
        raise ConfigError(f"field 'k_symbols' must be >= 1, got {k_symbols}")
    seed = _typed(raw, "seed", int, "", DEFAULTS["seed"])
    if not 0 <= seed < 2**64:
        raise ConfigError(f"field 'seed' must be a 64-bit unsigned integer, got {seed}")

    sweep_raw = _typed(raw, "sweep", dict, "", {})
    _reject_unknown(sweep_raw, {"kind", "grid"}, "sweep.")
    kind = _typed(sweep_raw, "kind", str, "sweep.", "single-point")
    if kind not in SWEEP_KINDS:
        raise ConfigError(f"field 'sweep.kind' must be one of {SWEEP_KINDS}, got {kind!r}")
    grid_raw = _typed(sweep_raw, "grid", list, "sweep.", None)
    if grid_raw is None:
        grid = _default_grid(kind, scenario)
    else:
        if not grid_raw:
            raise ConfigError("field 'sweep.grid' must be non-empty")
        for v in grid_raw:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"field 'sweep.grid' entries must be numbers, got {v!r}")
        grid = tuple(float(v) for v in grid_raw)
    if kind in ("angle", "variance-profile", "single-point"):
        for v in grid:
            if not 0.0 < v < 180.0:
                raise ConfigError(f"field 'sweep.grid': angle {v} outside (0, 180)")

    return RunConfig(
        scenario=scenario,
        scheme=scheme,
        m=m,
        k_symbols=k_symbols,
        seed=seed,
        split=split,
        sweep_kind=kind,
        grid=grid,
        output_path=Path(_typed(raw, "output_path", str, "", "results.csv")),
    )


def load_raw(path: str | Path | None = None):
    """Parse a config file to its raw JSON object; empty or missing -> ``{}``."""
    if path is None:
        return {}
    text = Path(path).read_text()
    if not text.strip():
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load a JSON config file; ``None`` or an empty file gives the defaults."""
    return build_run_config(load_raw(path))


def default_scenario() -> Scenario:
    return build_run_config({}).scenario


def default_run_config(**overrides) -> RunConfig:
    """Default config with keyword overrides applied on the raw schema level."""
    return build_run_config(overrides)

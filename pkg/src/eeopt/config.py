"""Run configuration: TOML parsing, dB conversions, parameter overrides.

This is the only layer that understands decibels. Configs carry the
field-style inputs (noise PSD in dBm/Hz, noise figure in dB, reference
gain in dB, distance in meters) and everything is converted exactly once,
here, into the linear SI units the solver core works in. The defaults
reproduce the baseline simulation scenario: 10 kHz bandwidth, -170 dBm/Hz
noise PSD, 10 dB noise figure, amplifier efficiency 0.4, kappa = 9e-8,
188 mW static draw, and a Rayleigh channel whose mean gain follows a
-70 dB reference at 1 m with path exponent 3.5 at 10 m distance.

Config files are TOML with a flat top level plus three optional tables
(circuit_power, channel, expectation); unknown keys are rejected with
their full path so typos fail loudly instead of silently running the
defaults. Command-line flags override file values through
apply_overrides, and sweeps re-derive per-point configs through
SweepSpec.apply_to, clearing any cached linear value the swept input
invalidates (a distance sweep drops a fixed mean gain, a noise-figure
sweep drops an explicit noise power).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .channel import (
    ExpectationSpec,
    FixedGain,
    GainModel,
    MonteCarlo,
    NakagamiGain,
    Quadrature,
    mean_gain_from_distance,
)
from .circuit import CircuitPowerModel
from .errors import ConfigError
from .minpower import ChannelCase
from .optimizer import LinkParams

__all__ = [
    "RunConfig",
    "SweepSpec",
    "SWEEPABLE",
    "load_config",
    "apply_overrides",
    "db_to_linear",
    "dbm_to_watts",
]

ALL_CASES = (ChannelCase.STATIC_CSIT, ChannelCase.FADING_CDIT, ChannelCase.FADING_CSIT)

SWEEPABLE = ("kappa", "noise_figure_db", "p_static", "distance_m", "nakagami_m")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


@dataclass(frozen=True)
class RunConfig:
    """Declarative description of a run; see module docstring for units."""

    bandwidth_hz: float = 1e4
    pa_efficiency: float = 0.4
    kappa: float = 9e-8
    p_static_w: float = 0.188
    noise_psd_dbm_per_hz: float = -170.0
    noise_figure_db: float = 10.0
    noise_power_w: float | None = None  # explicit sigma^2 in W; wins over the dB inputs
    circuit: CircuitPowerModel = field(default_factory=CircuitPowerModel.linear)
    cases: tuple[ChannelCase, ...] = ALL_CASES
    gain_fixed: float | None = None  # deterministic gain used by every case
    gain_mean: float | None = None   # mean gain; fading cases draw around it
    distance_m: float = 10.0
    g0_db: float = -70.0
    path_exp: float = 3.5
    nakagami_m: float = 1.0
    expectation: ExpectationSpec = field(default_factory=ExpectationSpec)
    delta: float = 1e-8
    output_path: str | None = None

    def resolved_noise_power(self) -> float:
        if self.noise_power_w is not None:
            return self.noise_power_w
        psd = dbm_to_watts(self.noise_psd_dbm_per_hz)
        return self.bandwidth_hz * psd * db_to_linear(self.noise_figure_db)

    def resolved_mean_gain(self) -> float:
        if self.gain_fixed is not None:
            return self.gain_fixed
        if self.gain_mean is not None:
            return self.gain_mean
        return mean_gain_from_distance(self.distance_m, db_to_linear(self.g0_db), self.path_exp)

    def resolved_gain(self, case: ChannelCase) -> GainModel:
        if self.gain_fixed is not None:
            return FixedGain(self.gain_fixed)
        mean = self.resolved_mean_gain()
        if case is ChannelCase.STATIC_CSIT:
            return FixedGain(mean)
        return NakagamiGain(self.nakagami_m, mean)

    def link_params(self, case: ChannelCase) -> LinkParams:
        """Materialize the solver-facing parameters for one channel case."""
        gain = self.resolved_gain(case)
        if (
            case is not ChannelCase.STATIC_CSIT
            and isinstance(gain, NakagamiGain)
            and isinstance(self.expectation.method, MonteCarlo)
        ):
            raise ConfigError(
                "expectation.method: monte_carlo cannot drive the solvers; "
                "use quadrature (Monte Carlo is a cross-check method)"
            )
        try:
            return LinkParams(
                bandwidth_hz=self.bandwidth_hz,
                noise_power_w=self.resolved_noise_power(),
                pa_efficiency=self.pa_efficiency,
                kappa=self.kappa,
                p_static_w=self.p_static_w,
                case=case,
                gain=gain,
                circuit=self.circuit,
                expectation=self.expectation,
            )
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def validate(self) -> "RunConfig":
        if not self.cases:
            raise ConfigError("channel.cases: at least one case is required")
        if not self.delta > 0:
            raise ConfigError(f"delta: must be positive, got {self.delta}")
        for case in self.cases:
            self.link_params(case)
        return self


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep: which input varies, over what grid."""

    parameter: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ConfigError(
                f"sweep parameter must be one of {', '.join(SWEEPABLE)}, got {self.parameter!r}"
            )
        if not self.start < self.stop:
            raise ConfigError(f"sweep start must be below stop, got [{self.start}, {self.stop}]")
        if self.points < 2:
            raise ConfigError(f"sweep needs at least 2 points, got {self.points}")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"sweep scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and not self.start > 0:
            raise ConfigError("log-scale sweep requires start > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def apply_to(self, config: RunConfig, value: float) -> RunConfig:
        """Config for one sweep point, dropping inputs the swept value supersedes."""
        if self.parameter == "kappa":
            return dataclasses.replace(config, kappa=value)
        if self.parameter == "noise_figure_db":
            return dataclasses.replace(config, noise_figure_db=value, noise_power_w=None)
        if self.parameter == "p_static":
            return dataclasses.replace(config, p_static_w=value)
        if self.parameter == "distance_m":
            return dataclasses.replace(config, distance_m=value, gain_fixed=None, gain_mean=None)
        if config.gain_fixed is not None:
            raise ConfigError("nakagami_m sweep requires a distributed gain, not channel.gain_fixed")
        return dataclasses.replace(config, nakagami_m=value)


def _take(table: dict, key: str, kind: str, path: str):
    """Pop a typed value; None when absent. Leftover keys mean typos."""
    if key not in table:
        return None
    value = table.pop(key)
    where = f"{path}.{key}" if path else key
    if kind == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if kind == "str_list":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{where}: expected a list of strings, got {value!r}")
        return value
    raise AssertionError(kind)


def _reject_unknown(table: dict, path: str):
    if table:
        key = next(iter(table))
        where = f"{path}.{key}" if path else key
        raise ConfigError(f"unknown key {where}")


def _parse_case(name: str) -> ChannelCase:
    try:
        return ChannelCase(name)
    except ValueError:
        valid = ", ".join(c.value for c in ALL_CASES)
        raise ConfigError(f"unknown case {name!r}; valid cases: {valid}") from None


def _parse_circuit(table: dict) -> CircuitPowerModel:
    kind = _take(table, "kind", "str", "circuit_power")
    alpha = _take(table, "alpha", "number", "circuit_power")
    _reject_unknown(table, "circuit_power")
    if kind is None:
        kind = "linear"
    try:
        if kind == "linear":
            if alpha is not None:
                raise ConfigError("circuit_power.alpha only applies to the powerlaw kind")
            return CircuitPowerModel.linear()
        if kind == "powerlaw":
            if alpha is None:
                raise ConfigError("circuit_power.alpha is required for the powerlaw kind")
            return CircuitPowerModel.power_law(alpha)
    except ValueError as err:
        raise ConfigError(f"circuit_power: {err}") from err
    raise ConfigError(f"circuit_power.kind: expected linear or powerlaw, got {kind!r}")


def _parse_expectation(table: dict) -> ExpectationSpec:
    method = _take(table, "method", "str", "expectation")
    order = _take(table, "order", "int", "expectation")
    samples = _take(table, "samples", "int", "expectation")
    seed = _take(table, "seed", "int", "expectation")
    rel_tol = _take(table, "rel_tol", "number", "expectation")
    _reject_unknown(table, "expectation")
    if method is None:
        method = "quadrature"
    try:
        if method == "quadrature":
            if samples is not None or seed is not None:
                raise ConfigError("expectation.samples/seed only apply to monte_carlo")
            inner = Quadrature(order=order if order is not None else 128)
        elif method == "monte_carlo":
            if order is not None:
                raise ConfigError("expectation.order only applies to quadrature")
            if samples is None or seed is None:
                raise ConfigError("expectation: monte_carlo requires samples and seed")
            inner = MonteCarlo(samples=samples, seed=seed)
        else:
            raise ConfigError(
                f"expectation.method: expected quadrature or monte_carlo, got {method!r}"
            )
    except ValueError as err:
        raise ConfigError(f"expectation: {err}") from err
    if rel_tol is None:
        return ExpectationSpec(method=inner)
    try:
        return ExpectationSpec(method=inner, rel_tol=rel_tol)
    except ValueError as err:
        raise ConfigError(f"expectation.rel_tol: {err}") from err


def load_config(path: str) -> RunConfig:
    """Parse and validate a TOML config file into a RunConfig."""
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"config file {path} is not valid TOML: {err}") from err

    updates: dict = {}

    circuit_table = raw.pop("circuit_power", None)
    if circuit_table is not None:
        if not isinstance(circuit_table, dict):
            raise ConfigError("circuit_power: expected a table")
        updates["circuit"] = _parse_circuit(dict(circuit_table))

    expectation_table = raw.pop("expectation", None)
    if expectation_table is not None:
        if not isinstance(expectation_table, dict):
            raise ConfigError("expectation: expected a table")
        updates["expectation"] = _parse_expectation(dict(expectation_table))

    channel_table = raw.pop("channel", None)
    if channel_table is not None:
        if not isinstance(channel_table, dict):
            raise ConfigError("channel: expected a table")
        channel = dict(channel_table)
        single = _take(channel, "case", "str", "channel")
        many = _take(channel, "cases", "str_list", "channel")
        if single is not None and many is not None:
            raise ConfigError("channel: give either case or cases, not both")
        if single is not None:
            updates["cases"] = (_parse_case(single),)
        elif many is not None:
            updates["cases"] = tuple(_parse_case(name) for name in many)
        for key in ("gain_fixed", "gain_mean", "distance_m", "g0_db", "path_exp", "nakagami_m"):
            value = _take(channel, key, "number", "channel")
            if value is not None:
                updates[key] = value
        _reject_unknown(channel, "channel")

    for key in (
        "bandwidth_hz",
        "pa_efficiency",
        "kappa",
        "p_static_w",
        "noise_psd_dbm_per_hz",
        "noise_figure_db",
        "noise_power_w",
        "delta",
    ):
        value = _take(raw, key, "number", "")
        if value is not None:
            updates[key] = value
    output_path = _take(raw, "output_path", "str", "")
    if output_path is not None:
        updates["output_path"] = output_path
    _reject_unknown(raw, "")

    return dataclasses.replace(RunConfig(), **updates).validate()


def apply_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Layer command-line flag values over a config; None values are skipped.

    A noise_figure_db override drops an explicit noise_power_w and a
    distance_m override drops explicit gains, so the flag actually takes
    effect instead of being shadowed by a precomputed linear value.
    """
    updates: dict = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "noise_figure_db":
            updates["noise_power_w"] = None
        if key == "distance_m":
            updates["gain_fixed"] = None
            updates["gain_mean"] = None
        updates[key] = value
    if not updates:
        return config
    try:
        return dataclasses.replace(config, **updates).validate()
    except ValueError as err:
        raise ConfigError(str(err)) from err

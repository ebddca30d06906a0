"""Energy-efficiency / spectral-efficiency optimization of a fading link.

The total power of a point-to-point link splits into a rate-dependent
circuit term, the amplifier draw behind the minimum transmission power
that sustains the target spectral efficiency, and a static floor. This
package computes the resulting energy-per-bit curve EE(C), its unique
minimizer, and parameter sweeps around it, for three channel-knowledge
cases (known static gain, known fading distribution, instantaneous gain
tracking with water-filling).
"""
from .errors import ConfigError, EeOptError, NumericalError, SolverError
from .circuit import CircuitPowerModel
from .channel import (
    ExpectationSpec,
    FixedGain,
    GainModel,
    MonteCarlo,
    NakagamiGain,
    Quadrature,
    expect,
    mean_gain_from_distance,
)
from .minpower import (
    ChannelCase,
    MinPowerBatch,
    WaterFillingSolution,
    batch_evaluate,
    marginal_excess,
    min_power,
    min_power_slope,
    solve_water_filling,
)
from .optimizer import (
    EeSePoint,
    LinkParams,
    OptimumResult,
    decision_function,
    ee,
    grid_oracle,
    limit_se_kappa_zero,
    limit_se_noise_zero,
    optimize,
    total_power,
    tradeoff_curve,
)
from .config import RunConfig, SweepSpec, apply_overrides, load_config
from .runner import run_optimize, run_sweep, run_tradeoff

__version__ = "0.1.0"

__all__ = [
    "CircuitPowerModel",
    "ChannelCase",
    "ConfigError",
    "EeOptError",
    "EeSePoint",
    "ExpectationSpec",
    "FixedGain",
    "GainModel",
    "LinkParams",
    "MinPowerBatch",
    "MonteCarlo",
    "NakagamiGain",
    "NumericalError",
    "OptimumResult",
    "Quadrature",
    "RunConfig",
    "SolverError",
    "SweepSpec",
    "WaterFillingSolution",
    "apply_overrides",
    "batch_evaluate",
    "decision_function",
    "ee",
    "expect",
    "grid_oracle",
    "limit_se_kappa_zero",
    "limit_se_noise_zero",
    "load_config",
    "marginal_excess",
    "mean_gain_from_distance",
    "min_power",
    "min_power_slope",
    "optimize",
    "run_optimize",
    "run_sweep",
    "run_tradeoff",
    "solve_water_filling",
    "total_power",
    "tradeoff_curve",
    "__version__",
]

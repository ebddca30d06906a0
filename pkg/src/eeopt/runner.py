"""Batch runners behind the CLI: optimize, tradeoff curve, parameter sweep.

All three return CSV text (RFC-4180-style, header row, '.' decimal,
newline line endings, literal `inf` for the zero-SE sentinel). Floats are
rendered with repr, whose shortest round-trip form parses back to the
exact same double, so emitted files are byte-stable across runs and
machines given identical configs.

Sweeps may evaluate their points on a thread pool; results are gathered
and emitted in sweep order regardless of completion order, keeping the
output deterministic. Any failing point aborts the whole sweep with the
offending value named, since a partially swept CSV is worse than none.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import RunConfig, SweepSpec
from .errors import ConfigError, SolverError
from .optimizer import optimize, tradeoff_curve

__all__ = ["run_optimize", "run_tradeoff", "run_sweep"]

OPTIMIZE_HEADER = ("case", "c_star", "ee_star", "iterations", "final_bracket_width")
TRADEOFF_HEADER = ("case", "C", "total_power_w", "ee_j_per_bit", "gamma_w")
SWEEP_HEADER = ("case", "sweep_param", "sweep_value", "c_star", "ee_star")


def _fmt(value: float) -> str:
    # repr of a Python float is the shortest string that round-trips;
    # numpy scalars must be unwrapped first or they render as np.float64(x)
    return repr(float(value))


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def run_optimize(config: RunConfig) -> tuple[str, str]:
    """Optimize every configured case; returns (csv_text, summary_text)."""
    config.validate()
    rows = []
    summary = []
    for case in config.cases:
        params = config.link_params(case)
        try:
            result = optimize(params, delta=config.delta)
        except SolverError as err:
            raise SolverError(f"{case.value}: {err}") from err
        rows.append(
            (
                case.value,
                _fmt(result.c_star),
                _fmt(result.ee_star),
                str(result.iterations),
                _fmt(result.final_bracket_width),
            )
        )
        summary.append(
            f"{case.value}: c_star={result.c_star:.6f} bits/s/Hz, "
            f"ee_star={result.ee_star:.6e} J/bit "
            f"({result.iterations} iterations, bracket width {result.final_bracket_width:.3g})"
        )
    return _csv(OPTIMIZE_HEADER, rows), "\n".join(summary) + "\n"


def run_tradeoff(config: RunConfig, c_min: float, c_max: float, points: int) -> str:
    """EE-SE curve rows over a uniform SE grid, one block per case."""
    config.validate()
    if not 0 <= c_min < c_max:
        raise ConfigError(f"tradeoff needs 0 <= c_min < c_max, got [{c_min}, {c_max}]")
    if points < 2:
        raise ConfigError(f"tradeoff needs at least 2 grid points, got {points}")
    grid = np.linspace(c_min, c_max, points)
    rows = []
    for case in config.cases:
        params = config.link_params(case)
        try:
            curve = tradeoff_curve(params, grid)
        except SolverError as err:
            raise SolverError(f"{case.value}: {err}") from err
        rows.extend(
            (
                case.value,
                _fmt(point.se),
                _fmt(point.total_power_w),
                _fmt(point.ee_j_per_bit),
                _fmt(point.gamma_w),
            )
            for point in curve
        )
    return _csv(TRADEOFF_HEADER, rows)


def run_sweep(config: RunConfig, sweep: SweepSpec, jobs: int = 1) -> str:
    """Re-optimize every case at each sweep value; rows in sweep order."""
    config.validate()
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    values = sweep.values()

    def at_value(value: float):
        try:
            point_config = sweep.apply_to(config, value)
            block = []
            for case in point_config.cases:
                result = optimize(point_config.link_params(case), delta=point_config.delta)
                block.append(
                    (
                        case.value,
                        sweep.parameter,
                        _fmt(value),
                        _fmt(result.c_star),
                        _fmt(result.ee_star),
                    )
                )
            return block
        except ConfigError as err:
            raise ConfigError(f"sweep point {sweep.parameter}={value:g}: {err}") from err
        except SolverError as err:
            raise SolverError(f"sweep point {sweep.parameter}={value:g}: {err}") from err

    if jobs == 1:
        blocks = [at_value(float(v)) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(at_value, float(v)) for v in values]
            blocks = [future.result() for future in futures]

    rows = [row for block in blocks for row in block]
    return _csv(SWEEP_HEADER, rows)

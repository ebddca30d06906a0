"""Energy-per-bit minimization over the spectral efficiency.

The total consumed power of the link at spectral efficiency C is

    P(C) = kappa * phi(W C) + (sigma^2 / xi) * psi(C) + P_c

with phi the circuit-power factor of the rate, psi the noise-normalized
minimum transmission power for the active channel-knowledge case, xi the
power amplifier efficiency and P_c the static circuit draw. The energy
efficiency EE(C) = P(C) / (W C) J/bit (smaller is better) is infinite at
C = 0, strictly quasiconvex, and has a unique minimizer C*.

Rather than minimizing EE directly, the solver bisects the decision
function

    D(C) = kappa * g(W C) + (sigma^2 / xi) * f(C) - P_c

where g and f are the marginal-excess transforms of phi and psi. D is
strictly increasing from -P_c, and its sign tells which side of C* a
point lies on, so a doubling bracket plus bisection pins C* to any
width delta. Killing one of the two growing terms gives the closed
limits: with kappa = 0 the optimum solves (sigma^2/xi) f(C) = P_c, and
with sigma^2 = 0 (strictly convex phi only) it solves g(W C) = P_c / kappa.

A brute-force grid oracle is included for validation; it shares the
batched power evaluations, so dense grids stay cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ExpectationSpec, FixedGain, GainModel
from .circuit import CircuitPowerModel
from .errors import SolverError
from .minpower import ChannelCase, batch_evaluate

__all__ = [
    "LinkParams",
    "EeSePoint",
    "OptimumResult",
    "total_power",
    "ee",
    "decision_function",
    "optimize",
    "limit_se_kappa_zero",
    "limit_se_noise_zero",
    "tradeoff_curve",
    "grid_oracle",
]


@dataclass(frozen=True)
class LinkParams:
    """Everything the link-level power model needs, in linear SI units.

    dB-style inputs (noise figure, reference gain) belong to the config
    layer; by the time a LinkParams exists they are Watts and ratios.
    """

    bandwidth_hz: float
    noise_power_w: float
    pa_efficiency: float
    kappa: float
    p_static_w: float
    case: ChannelCase
    gain: GainModel
    circuit: CircuitPowerModel = field(default_factory=CircuitPowerModel.linear)
    expectation: ExpectationSpec = field(default_factory=ExpectationSpec)

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if not self.noise_power_w > 0:
            raise ValueError(f"noise power must be positive, got {self.noise_power_w}")
        if not 0 < self.pa_efficiency <= 1:
            raise ValueError(f"amplifier efficiency must be in (0, 1], got {self.pa_efficiency}")
        if not self.kappa >= 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if not self.p_static_w > 0:
            raise ValueError(f"static power must be positive, got {self.p_static_w}")
        if self.case is ChannelCase.STATIC_CSIT and not isinstance(self.gain, FixedGain):
            raise ValueError("static channel knowledge requires a fixed gain")


@dataclass(frozen=True)
class EeSePoint:
    """One point of the EE-SE tradeoff curve."""

    se: float
    total_power_w: float
    ee_j_per_bit: float
    gamma_w: float


@dataclass(frozen=True)
class OptimumResult:
    """Optimizer output: the optimum point plus solve bookkeeping."""

    c_star: float
    ee_star: float
    iterations: int
    final_bracket_width: float


def _curve_arrays(params: LinkParams, se: np.ndarray):
    """(total power, EE, decision value) over an array of SE targets."""
    se = np.asarray(se, dtype=float)
    psi, _, excess = batch_evaluate(params.case, params.gain, se, params.expectation)
    rate = params.bandwidth_hz * se
    amp = params.noise_power_w / params.pa_efficiency
    total = params.kappa * params.circuit.value(rate) + amp * psi + params.p_static_w
    decision = params.kappa * params.circuit.marginal_excess(rate) + amp * excess - params.p_static_w
    ee_vals = np.full_like(se, np.inf)
    pos = se > 0
    ee_vals[pos] = total[pos] / (params.bandwidth_hz * se[pos])
    return total, ee_vals, decision


def total_power(params: LinkParams, se: float) -> float:
    """Total consumed power P(se) in Watts; P(0) = p_static_w exactly."""
    if not se >= 0:
        raise ValueError("spectral efficiency must be >= 0")
    return float(_curve_arrays(params, np.array([se]))[0][0])


def ee(params: LinkParams, se: float) -> float:
    """Energy per bit P(se)/(W se) in J/bit; +inf at se = 0 by convention."""
    if not se >= 0:
        raise ValueError("spectral efficiency must be >= 0")
    if se == 0:
        return math.inf
    return float(_curve_arrays(params, np.array([se]))[1][0])


def decision_function(params: LinkParams, se: float) -> float:
    """Marginal-excess balance in Watts; negative below the EE optimum,
    zero at it, positive above. Equals -p_static_w at se = 0."""
    if not se >= 0:
        raise ValueError("spectral efficiency must be >= 0")
    return float(_curve_arrays(params, np.array([se]))[2][0])


def optimize(params: LinkParams, delta: float = 1e-8, c_max: float = 64.0) -> OptimumResult:
    """Locate the unique EE optimum by bracketing the decision function.

    Doubles the upper end of the SE bracket from [0, 1] until the decision
    function turns non-negative, then bisects until the bracket is narrower
    than delta; c_star is the final midpoint. A decision value within
    1e-14 * p_static_w of zero is accepted as an exact hit (a literal
    floating-point zero is a measure-zero event).

    Raises SolverError if the decision function is still negative at c_max,
    which signals parameters whose optimum is beyond numeric comfort
    (2**c_max already strains double precision).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    zero_band = 1e-14 * params.p_static_w
    iterations = 0

    def decision_at(c: float) -> float:
        nonlocal iterations
        iterations += 1
        return decision_function(params, c)

    lo, hi = 0.0, 1.0
    value = decision_at(hi)
    while value < 0.0:
        if 2.0 * hi > c_max:
            raise SolverError(
                f"decision function still negative at {hi:g} bits/s/Hz; "
                f"no optimum below the cap of {c_max:g}"
            )
        hi *= 2.0
        value = decision_at(hi)
    while (hi - lo) > delta:
        mid = 0.5 * (lo + hi)
        value = decision_at(mid)
        if abs(value) <= zero_band:
            lo = hi = mid
            break
        if value < 0.0:
            lo = mid
        else:
            hi = mid
    c_star = 0.5 * (lo + hi)
    return OptimumResult(
        c_star=c_star,
        ee_star=ee(params, c_star),
        iterations=iterations,
        final_bracket_width=hi - lo,
    )


def _rising_root(term, target: float, delta: float, cap: float, what: str) -> float:
    """Root of term(c) = target for strictly increasing term, term(0) < target."""
    lo, hi = 0.0, 1.0
    while term(hi) < target:
        if 2.0 * hi > cap:
            raise SolverError(f"{what} stays below its target up to {hi:g} bits/s/Hz")
        hi *= 2.0
    while (hi - lo) > delta:
        mid = 0.5 * (lo + hi)
        if term(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def limit_se_kappa_zero(params: LinkParams, delta: float = 1e-8, c_max: float = 64.0) -> float:
    """The optimum SE with the rate-dependent circuit term removed.

    Solves (sigma^2 / xi) f(C) = p_static_w. For a linear circuit model
    this equals optimize()'s c_star for every kappa, since then the
    decision function never depends on kappa.
    """
    amp = params.noise_power_w / params.pa_efficiency

    def term(c: float) -> float:
        return amp * float(
            batch_evaluate(params.case, params.gain, np.array([c]), params.expectation).excess[0]
        )

    return _rising_root(term, params.p_static_w, delta, c_max, "transmission-power excess")


def limit_se_noise_zero(params: LinkParams, delta: float = 1e-8, c_max: float = 2.0**20) -> float:
    """The optimum SE in the vanishing-noise limit.

    Solves kappa * g(W C) = p_static_w where g is the circuit model's
    marginal excess, which requires kappa > 0 and a strictly convex
    circuit model; a linear model has g identically zero and no root.

    The excess could conceivably be evaluated at the bare spectral
    efficiency instead of the rate W*C; this solver uses the rate, since
    kappa multiplies a function of rate everywhere else in the power
    model and only that reading is dimensionally consistent.
    """
    if not params.kappa > 0:
        raise SolverError("vanishing-noise limit needs kappa > 0")
    if not params.circuit.is_strictly_convex:
        raise SolverError(
            "vanishing-noise limit does not exist for a linear circuit model "
            "(its marginal excess is identically zero)"
        )

    def term(c: float) -> float:
        return params.kappa * float(params.circuit.marginal_excess(params.bandwidth_hz * c))

    return _rising_root(term, params.p_static_w, delta, c_max, "circuit-power excess")


def tradeoff_curve(params: LinkParams, c_grid) -> list[EeSePoint]:
    """EE-SE curve over a strictly increasing grid of SE values (>= 0).

    Grid entries at exactly 0 carry the +inf EE sentinel so curves that
    start at the origin need no special casing downstream.
    """
    grid = np.asarray(c_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    if np.any(grid < 0):
        raise ValueError("grid values must be >= 0")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    total, ee_vals, decision = _curve_arrays(params, grid)
    return [
        EeSePoint(
            se=float(c),
            total_power_w=float(p),
            ee_j_per_bit=float(e),
            gamma_w=float(d),
        )
        for c, p, e, d in zip(grid, total, ee_vals, decision)
    ]


def grid_oracle(params: LinkParams, c_max: float, step: float) -> tuple[float, float]:
    """Brute-force EE minimum over the grid {step, 2 step, ..., c_max}.

    Exists to validate the bisection against something that cannot be
    fooled by a wrong sign rule; batched evaluation keeps step = 1e-3
    grids affordable.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if not c_max > step:
        raise ValueError("c_max must exceed step")
    count = int(np.floor(c_max / step + 1e-9))
    grid = step * np.arange(1, count + 1)
    _, ee_vals, _ = _curve_arrays(params, grid)
    best = int(np.argmin(ee_vals))
    return float(grid[best]), float(ee_vals[best])

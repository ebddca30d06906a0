"""Minimum transmission power for a target spectral efficiency.

Everything here answers one question: given a spectral efficiency target
C (bits/s/Hz), what is the smallest transmission power, normalized by the
noise power, that sustains it? Three channel-knowledge cases are covered:

* STATIC_CSIT: the gain G is a known constant. psi(C) = (2**C - 1) / G in
  closed form.
* FADING_CDIT: only the gain distribution is known, the transmitter sends
  at constant power and the ergodic rate E[log2(1 + G p)] must reach C.
  psi(C) is the root in p of that rate equation.
* FADING_CSIT: the transmitter tracks the instantaneous gain and
  water-fills, p(G) = max(v - 1/G, 0). psi(C) is E[p(G)] at the water
  level v whose ergodic rate E[log2(max(G v, 1))] equals C.

Besides psi itself the module exposes its derivative psi' (the marginal
power cost of one more bit/s/Hz; for water-filling this is exactly the
Lagrange multiplier mu = v ln 2) and the combination f(C) = C psi'(C) -
psi(C). f is the power-side excess of marginal-cost pricing over actual
consumption; it is zero at C = 0, non-decreasing, and drives the
optimality condition of the energy-per-bit minimization upstream.

Numerics
--------
The fading-CSIT tail integrals are evaluated through two scale-free
kernels in t = G m / mean_gain with t0 = m / (mean_gain v): a power
series around the origin for t0 < 1 and a shifted 128-point Gauss-Laguerre
rule for t0 >= 1, both carried in log space so extreme shapes and water
levels cannot overflow. The fading-CDIT rate equation runs on the
composite quadrature mixture from the channel module: a coarse

bracketing bisection followed by Newton steps, which converge
monotonically because the ergodic rate is concave in the power.

All solvers accept arrays of targets at once; the scalar API wraps the
batched one. Monte Carlo expectation specs are rejected here by design:
the solvers need a fixed deterministic mixture to stay monotone.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np
from scipy.special import digamma, gammaincc, gammaln, logsumexp, roots_laguerre

from .channel import (
    ExpectationSpec,
    FixedGain,
    GainModel,
    MonteCarlo,
    NakagamiGain,
    _gain_nodes,
)
from .errors import SolverError

__all__ = [
    "ChannelCase",
    "WaterFillingSolution",
    "MinPowerBatch",
    "min_power",
    "min_power_slope",
    "marginal_excess",
    "solve_water_filling",
    "batch_evaluate",
]

LN2 = float(np.log(2.0))

# series order for the t0 < 1 kernels; 1/60! ~ 1e-82 so truncation is moot
_K = np.arange(60)
_FACT = np.concatenate(([1.0], np.cumprod(np.arange(1.0, 60.0))))


class ChannelCase(Enum):
    """What the transmitter knows about the channel."""

    STATIC_CSIT = "static_csit"
    FADING_CDIT = "fading_cdit"
    FADING_CSIT = "fading_csit"


@dataclass(frozen=True)
class WaterFillingSolution:
    """Water level and bookkeeping for a fading-CSIT power allocation.

    mu_star is the rate-power Lagrange multiplier (equals psi'(C)),
    avg_power the mean allocated power E[p(G)], and rate_check the
    ergodic rate actually achieved at the returned level, for auditing
    the solve.
    """

    mu_star: float
    avg_power: float
    rate_check: float

    def allocation(self, gain_value):
        """Instantaneous power max(mu_star/ln2 - 1/G, 0) at gain_value."""
        g = np.asarray(gain_value, dtype=float)
        return np.maximum(self.mu_star / LN2 - 1.0 / g, 0.0)


class MinPowerBatch(NamedTuple):
    psi: np.ndarray
    slope: np.ndarray
    excess: np.ndarray


@lru_cache(maxsize=8)
def _laguerre():
    s, w = roots_laguerre(128)
    s.flags.writeable = False
    w.flags.writeable = False
    return s, w


@lru_cache(maxsize=64)
def _log_tail_from_one(m: float) -> float:
    # log of int_1^inf t^(m-2) e^-t dt via the shifted Laguerre rule
    s, w = _laguerre()
    return float(logsumexp(np.log(w) + (m - 2.0) * np.log1p(s)) - 1.0)


def _powers(x: np.ndarray, n: int) -> np.ndarray:
    """Column k holds x**k, built by cumulative products (pow is slow)."""
    cols = np.ones((x.size, n))
    cols[:, 1:] = x[:, None]
    return np.cumprod(cols, axis=1)


def _tail_rate_nats(m: float, t0: np.ndarray) -> np.ndarray:
    """E[ln(T/t0); T > t0] for T ~ Gamma(m, 1), vectorized over t0."""
    t0 = np.asarray(t0, dtype=float)
    out = np.empty_like(t0)
    small = t0 < 1.0
    if small.any():
        ts = t0[small]
        series = _powers(-ts, _K.size) @ (1.0 / (_FACT * (m + _K) ** 2))
        lt = np.log(ts)
        out[small] = (digamma(m) - lt) + np.exp(m * lt - gammaln(m)) * series
    if (~small).any():
        s, w = _laguerre()
        tb = t0[~small]
        top = float(tb.max())
        if top < 600.0 and m * np.log(top + 500.0) < 600.0:
            vals = np.log1p(s / tb[:, None]) * (tb[:, None] + s) ** (m - 1.0)
            out[~small] = np.exp(-tb - gammaln(m)) * (vals @ w)
        else:
            # extreme shape or truncation point; go through log space
            terms = np.log(w) + np.log(np.log1p(s / tb[:, None])) + (m - 1.0) * np.log(tb[:, None] + s)
            out[~small] = np.exp(-tb - gammaln(m) + logsumexp(terms, axis=1))
    return out


def _tail_inverse_moment(m: float, t0: np.ndarray) -> np.ndarray:
    """E[1/T; T > t0] for T ~ Gamma(m, 1), vectorized over t0."""
    t0 = np.asarray(t0, dtype=float)
    out = np.empty_like(t0)
    small = t0 < 1.0
    if small.any():
        lt = np.log(t0[small])[:, None]
        eps = (m - 1.0) + _K
        near0 = np.abs(eps) < 1e-12
        safe = np.where(near0, 1.0, eps)
        # int_{t0}^1 t^(eps-1) dt, stable through eps = 0 (the log case)
        frac = np.where(near0, -lt, -np.expm1(safe * lt) / safe)
        series = frac @ ((-1.0) ** _K / _FACT)
        out[small] = np.exp(_log_tail_from_one(m) - gammaln(m)) + series * np.exp(-gammaln(m))
    if (~small).any():
        s, w = _laguerre()
        tb = t0[~small]
        top = float(tb.max())
        if top < 600.0 and m * np.log(top + 500.0) < 600.0:
            out[~small] = np.exp(-tb - gammaln(m)) * ((tb[:, None] + s) ** (m - 2.0) @ w)
        else:
            terms = np.log(w) + (m - 2.0) * np.log(tb[:, None] + s)
            out[~small] = np.exp(-tb - gammaln(m) + logsumexp(terms, axis=1))
    return out


def _wf_rate(m: float, mean_gain: float, level: np.ndarray) -> np.ndarray:
    """Ergodic water-filling rate E[log2(max(G v, 1))] at water level v."""
    level = np.asarray(level, dtype=float)
    out = np.zeros_like(level)
    pos = level > 0
    if pos.any():
        t0 = np.clip(m / (mean_gain * level[pos]), 1e-300, 1e300)
        out[pos] = _tail_rate_nats(m, t0) / LN2
    return out


def _wf_power(m: float, mean_gain: float, level: np.ndarray) -> np.ndarray:
    """Mean allocated power E[max(v - 1/G, 0)] at water level v."""
    level = np.asarray(level, dtype=float)
    out = np.zeros_like(level)
    pos = level > 0
    if pos.any():
        v = level[pos]
        t0 = np.clip(m / (mean_gain * v), 1e-300, 1e300)
        out[pos] = v * gammaincc(m, t0) - (m / mean_gain) * _tail_inverse_moment(m, t0)
    return out


def _waterfill_levels(m: float, mean_gain: float, se: np.ndarray, rel_tol: float):
    """Water levels solving the ergodic rate equation for each positive se."""
    C = np.asarray(se, dtype=float)
    # seed from the small-t0 expansion rate ~ (digamma(m) - ln t0)/ln2,
    # nearly exact at high rates, then bracket around it
    with np.errstate(over="ignore"):
        v0 = (m / mean_gain) * np.exp(C * LN2 - digamma(m))
    if not np.all(np.isfinite(v0)):
        raise SolverError(
            f"water level overflows double precision at se={C[~np.isfinite(v0)][0]:.6g}"
        )
    lo = v0 * 0.25
    hi = v0 * 4.0
    idx = np.flatnonzero(_wf_rate(m, mean_gain, lo) >= C)
    for _ in range(600):
        if idx.size == 0:
            break
        lo[idx] *= 0.25
        idx = idx[_wf_rate(m, mean_gain, lo[idx]) >= C[idx]]
    else:
        raise SolverError("no lower bracket for the water level; rate target degenerate")
    idx = np.flatnonzero(_wf_rate(m, mean_gain, hi) < C)
    for _ in range(600):
        if idx.size == 0:
            break
        hi[idx] *= 4.0
        if float(hi[idx].max()) > 1e305:
            worst = float(C[idx[np.argmax(hi[idx])]])
            raise SolverError(
                f"water level bracket exceeded 1e305 chasing rate {worst:.6g} bits/s/Hz"
            )
        idx = idx[_wf_rate(m, mean_gain, hi[idx]) < C[idx]]
    else:
        raise SolverError("water level bracket kept growing; rate target unreachable")
    # updates are masked so each element's trajectory is independent of
    # whatever else happens to share the batch
    while True:
        wide = (hi - lo) > 1e-4 * hi
        if not wide.any():
            break
        mid = 0.5 * (lo + hi)
        below = _wf_rate(m, mean_gain, mid) < C
        lo = np.where(wide & below, mid, lo)
        hi = np.where(wide & ~below, mid, hi)
    v = 0.5 * (lo + hi)
    # Newton in v: the rate is concave in v, so an iterate at or below the
    # root increases monotonically and an overshoot lands back below it
    target = np.maximum(rel_tol * C, 1e-15)
    done = np.zeros(C.shape, dtype=bool)
    resid = None
    for step in range(16):
        r = _wf_rate(m, mean_gain, v)
        resid = r - C
        if step >= 2:
            done |= np.abs(resid) <= target
            if done.all():
                break
        q = np.maximum(gammaincc(m, np.clip(m / (mean_gain * v), 1e-300, 1e300)), 1e-300)
        v = np.where(done, v, np.maximum(v - resid * v * LN2 / q, lo))
    else:
        worst = int(np.argmax(np.abs(resid)))
        raise SolverError(
            f"water level refinement stalled: residual {resid[worst]:.3e} "
            f"at se={C[worst]:.6g}"
        )
    return v, r


def _csit_batch(model: GainModel, se: np.ndarray, spec: ExpectationSpec) -> MinPowerBatch:
    se = np.asarray(se, dtype=float)
    psi = np.zeros_like(se)
    excess = np.zeros_like(se)
    pos = se > 0
    if isinstance(model, FixedGain):
        # point mass: the water level solves in closed form, v = 2^C / G
        g = model.gain
        level = np.exp2(se) / g
        slope = level * LN2
        psi[pos] = level[pos] - 1.0 / g
        excess[pos] = se[pos] * slope[pos] - psi[pos]
        return MinPowerBatch(psi, slope, excess)
    slope = np.zeros_like(se)  # the water level, hence mu, vanishes as C -> 0
    if pos.any():
        v, _ = _waterfill_levels(model.m, model.mean_gain, se[pos], spec.rel_tol)
        psi[pos] = _wf_power(model.m, model.mean_gain, v)
        slope[pos] = v * LN2
        excess[pos] = se[pos] * slope[pos] - psi[pos]
    return MinPowerBatch(psi, slope, excess)


def _cdit_batch(model: GainModel, se: np.ndarray, spec: ExpectationSpec) -> MinPowerBatch:
    g, w = _gain_nodes(model, spec)
    se = np.asarray(se, dtype=float)
    psi = np.zeros_like(se)
    excess = np.zeros_like(se)
    g_mean = float(w @ g)
    slope = np.full_like(se, LN2 / g_mean)  # p* -> 0 limit of ln2 / E[G/(1+Gp)]
    pos = se > 0
    if not pos.any():
        return MinPowerBatch(psi, slope, excess)
    C = se[pos]

    def rate_on(nodes, wts, p):
        return np.log1p(p[:, None] * nodes[None, :]) @ wts / LN2

    # coarse bracketing runs on a thinned, panel-preserving submixture
    if g.size > 32:
        gc = g[::8]
        wc = w[::8] / w[::8].sum()
    else:
        gc, wc = g, w
    # Jensen: E[log2(1+Gp)] <= log2(1+E[G]p), so this seed is a lower bound
    with np.errstate(over="ignore"):
        lo = (np.exp2(C) - 1.0) / g_mean * (1.0 - 1e-9)
    if not np.all(np.isfinite(lo)):
        raise SolverError(
            f"transmit power overflows double precision at se={C[~np.isfinite(lo)][0]:.6g}"
        )
    lo = np.maximum(lo, 1e-300)
    hi = 2.0 * lo
    idx = np.flatnonzero(rate_on(gc, wc, hi) < C)
    for _ in range(1100):
        if idx.size == 0:
            break
        lo[idx] = hi[idx]
        hi[idx] *= 2.0
        if float(hi[idx].max()) > 1e305:
            worst = float(C[idx[np.argmax(hi[idx])]])
            raise SolverError(
                f"transmit power bracket exceeded 1e305 chasing rate {worst:.6g} bits/s/Hz"
            )
        idx = idx[rate_on(gc, wc, hi[idx]) < C[idx]]
    else:
        raise SolverError("transmit power bracket kept growing; rate target unreachable")
    # masked updates keep each element's trajectory batch-independent
    while True:
        wide = (hi - lo) > 1e-6 * hi
        if not wide.any():
            break
        mid = 0.5 * (lo + hi)
        below = rate_on(gc, wc, mid) < C
        lo = np.where(wide & below, mid, lo)
        hi = np.where(wide & ~below, mid, hi)
    p = 0.5 * (lo + hi)
    # Newton on the full mixture; concavity in p gives monotone convergence
    floor = (np.exp2(C) - 1.0) / g_mean * (1.0 - 1e-9)
    target = np.maximum(spec.rel_tol * C, 1e-15)
    done = np.zeros(C.shape, dtype=bool)
    resid = None
    for step in range(16):
        a = p[:, None] * g[None, :]
        resid = np.log1p(a) @ w / LN2 - C
        if step >= 2:
            done |= np.abs(resid) <= target
            if done.all():
                break
        deriv = (g[None, :] / (1.0 + a)) @ w / LN2
        p = np.where(done, p, np.maximum(p - resid / deriv, floor))
    else:
        worst = int(np.argmax(np.abs(resid)))
        raise SolverError(
            f"constant-power rate solve stalled: residual {resid[worst]:.3e} "
            f"at se={C[worst]:.6g}"
        )
    denom = (g[None, :] / (1.0 + p[:, None] * g[None, :])) @ w
    sl = LN2 / denom
    psi[pos] = p
    slope[pos] = sl
    excess[pos] = C * sl - p
    return MinPowerBatch(psi, slope, excess)


def _static_batch(model: FixedGain, se: np.ndarray) -> MinPowerBatch:
    se = np.asarray(se, dtype=float)
    g = model.gain
    lc = se * LN2
    psi = np.expm1(lc) / g
    slope = (LN2 / g) * np.exp2(se)
    # C psi' - psi rearranged around expm1 so nothing cancels at small C
    excess = ((lc - 1.0) * np.expm1(lc) + lc) / g
    return MinPowerBatch(psi, slope, excess)


def _check_inputs(case: ChannelCase, gain: GainModel, se: np.ndarray, spec: ExpectationSpec):
    if case is ChannelCase.STATIC_CSIT and not isinstance(gain, FixedGain):
        raise ValueError("static channel knowledge requires a fixed gain")
    if isinstance(gain, NakagamiGain) and isinstance(spec.method, MonteCarlo):
        raise ValueError(
            "Monte Carlo expectations cannot drive the power solvers; "
            "use a quadrature spec (Monte Carlo stays a cross-check)"
        )
    if np.any(se < 0):
        raise ValueError("spectral efficiency must be >= 0")
    if np.any(se > 1020):
        raise ValueError("spectral efficiency above 1020 bits/s/Hz overflows double precision")


def batch_evaluate(
    case: ChannelCase,
    gain: GainModel,
    se_values,
    spec: ExpectationSpec | None = None,
) -> MinPowerBatch:
    """psi, psi' and f(C) = C psi' - psi for an array of targets at once.

    The three arrays share the inner solves, which is what makes dense
    tradeoff grids and brute-force oracles affordable.
    """
    if spec is None:
        spec = ExpectationSpec()
    se = np.asarray(se_values, dtype=float)
    _check_inputs(case, gain, se, spec)
    if case is ChannelCase.STATIC_CSIT:
        return _static_batch(gain, se)
    if case is ChannelCase.FADING_CDIT:
        return _cdit_batch(gain, se, spec)
    return _csit_batch(gain, se, spec)


def min_power(case, gain, se, spec=None) -> float:
    """Minimum noise-normalized transmission power psi(se); psi(0) = 0."""
    return float(batch_evaluate(case, gain, np.array([se]), spec).psi[0])


def min_power_slope(case, gain, se, spec=None) -> float:
    """d psi / d se; at se = 0 the one-sided limit of the case is returned."""
    return float(batch_evaluate(case, gain, np.array([se]), spec).slope[0])


def marginal_excess(case, gain, se, spec=None) -> float:
    """f(se) = se * psi'(se) - psi(se); zero at zero, non-decreasing."""
    return float(batch_evaluate(case, gain, np.array([se]), spec).excess[0])


def solve_water_filling(gain: GainModel, se: float, spec=None) -> WaterFillingSolution:
    """Water level for the fading-CSIT case at a positive rate target."""
    if spec is None:
        spec = ExpectationSpec()
    se_arr = np.array([float(se)])
    _check_inputs(ChannelCase.FADING_CSIT, gain, se_arr, spec)
    if not se > 0:
        raise ValueError("water-filling needs a positive rate target")
    if isinstance(gain, FixedGain):
        level = float(np.exp2(se)) / gain.gain
        return WaterFillingSolution(
            mu_star=level * LN2,
            avg_power=float(np.expm1(se * LN2)) / gain.gain,
            rate_check=float(se),
        )
    v, rate = _waterfill_levels(gain.m, gain.mean_gain, se_arr, spec.rel_tol)
    power = _wf_power(gain.m, gain.mean_gain, v)
    return WaterFillingSolution(
        mu_star=float(v[0]) * LN2,
        avg_power=float(power[0]),
        rate_check=float(rate[0]),
    )

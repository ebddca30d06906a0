"""Rate-dependent circuit power models.

The circuit power drawn by rate-adaptive components (coding, decoding, part
of the baseband processing) is modeled as kappa * value(R) where R is the
information rate in bits/s and kappa converts the factor into Watts. Two
convex shapes are supported:

* linear, value(R) = R, for circuitry whose consumption scales directly
  with throughput;
* power law, value(R) = R**alpha with alpha >= 1, for superlinear scaling.

Besides the value and its derivative, each model exposes

    marginal_excess(R) = R * derivative(R) - value(R),

the amount by which marginal-cost pricing of the current rate exceeds the
actual consumption. It is zero for the linear model, strictly increasing
for any strictly convex one, and is the circuit-side ingredient of the
decision function used by the optimizer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["CircuitPowerModel"]


@dataclass(frozen=True)
class CircuitPowerModel:
    """Convex rate-dependent circuit power factor.

    Parameters
    ----------
    kind : str
        Either ``"linear"`` or ``"powerlaw"``.
    alpha : float
        Exponent of the power-law model; must be >= 1. Ignored for the
        linear model (kept at 1.0).
    """

    kind: str
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "powerlaw"):
            raise ValueError(f"unknown circuit power kind {self.kind!r}")
        # alpha < 1 would make the factor concave and break the convexity
        # assumptions every downstream result relies on; reject at build time
        # so the evaluation paths stay branch-free.
        if self.kind == "powerlaw" and not self.alpha >= 1.0:
            raise ValueError(f"powerlaw exponent must be >= 1, got {self.alpha}")
        if self.kind == "linear" and self.alpha != 1.0:
            object.__setattr__(self, "alpha", 1.0)

    @classmethod
    def linear(cls) -> "CircuitPowerModel":
        return cls("linear")

    @classmethod
    def power_law(cls, alpha: float) -> "CircuitPowerModel":
        return cls("powerlaw", alpha)

    @property
    def is_strictly_convex(self) -> bool:
        return self.kind == "powerlaw" and self.alpha > 1.0

    def value(self, rate):
        """Circuit power factor at rate R >= 0 (multiply by kappa for Watts)."""
        _check_rate(rate)
        if self.kind == "linear":
            return rate
        return rate ** self.alpha

    def derivative(self, rate):
        """d value / d R at rate R >= 0."""
        _check_rate(rate)
        if self.kind == "linear":
            return 1.0 if np.isscalar(rate) else np.ones_like(np.asarray(rate, dtype=float))
        return self.alpha * rate ** (self.alpha - 1.0)

    def marginal_excess(self, rate):
        """R * value'(R) - value(R), evaluated in closed form.

        Computed from the per-model closed form, not as the literal
        difference, which would cancel catastrophically for alpha near 1.
        """
        _check_rate(rate)
        if self.kind == "linear":
            return 0.0 if np.isscalar(rate) else np.zeros_like(np.asarray(rate, dtype=float))
        return (self.alpha - 1.0) * rate ** self.alpha


def _check_rate(rate):
    if np.any(np.asarray(rate) < 0):
        raise ValueError("rate must be nonnegative")

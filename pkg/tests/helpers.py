"""Builders for the reference scenarios the regression literals belong to.

Frozen values in the tests come from an independent high-precision oracle
(closed forms in exponential-integral terms for the Rayleigh and fixed-gain
cases evaluated with mpmath at 40 digits, adaptive quadrature plus brentq
root solves elsewhere), not from this package.
"""
from __future__ import annotations

from eeopt import ChannelCase, FixedGain, LinkParams, NakagamiGain

# 10 kHz link at 10 m range: -70 dB gain at 1 m, path exponent 3.5,
# -170 dBm/Hz noise floor with a 10 dB noise figure, 188 mW static draw.
BASELINE_MEAN_GAIN = 1e-7 * 10.0 ** (-3.5)
BASELINE = dict(
    bandwidth_hz=1e4,
    noise_power_w=1e-15,
    pa_efficiency=0.4,
    kappa=9e-8,
    p_static_w=0.188,
)

# stronger-gain short link used for the curve-shape tests; its optimum sits
# near 1 bit/s/Hz so whole curves stay cheap to tabulate
ILLUSTRATION_GAIN = 1e-7
ILLUSTRATION = dict(
    bandwidth_hz=1e4,
    noise_power_w=1e-8,
    pa_efficiency=0.4,
    kappa=8e-8,
    p_static_w=0.1,
)

ALL_CASES = (ChannelCase.STATIC_CSIT, ChannelCase.FADING_CDIT, ChannelCase.FADING_CSIT)


def gain_for(case: ChannelCase, m: float = 1.0, mean_gain: float = BASELINE_MEAN_GAIN):
    if case is ChannelCase.STATIC_CSIT:
        return FixedGain(mean_gain)
    return NakagamiGain(m, mean_gain)


def make_link(
    case: ChannelCase,
    m: float = 1.0,
    mean_gain: float = BASELINE_MEAN_GAIN,
    scenario: dict | None = None,
    **overrides,
) -> LinkParams:
    fields = dict(BASELINE if scenario is None else scenario)
    fields.update(overrides)
    return LinkParams(case=case, gain=gain_for(case, m, mean_gain), **fields)

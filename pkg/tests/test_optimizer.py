"""EE-SE assembly and the bisection optimizer: frozen optima, the decision
sign rule, limit solvers, curve generation, and the brute-force oracle."""
import math

import numpy as np
import pytest

from eeopt import (
    ChannelCase,
    CircuitPowerModel,
    FixedGain,
    LinkParams,
    NakagamiGain,
    SolverError,
    decision_function,
    ee,
    grid_oracle,
    limit_se_kappa_zero,
    limit_se_noise_zero,
    marginal_excess,
    optimize,
    total_power,
    tradeoff_curve,
)
from helpers import (
    BASELINE,
    BASELINE_MEAN_GAIN,
    ILLUSTRATION,
    ILLUSTRATION_GAIN,
    make_link,
)

STATIC = ChannelCase.STATIC_CSIT
CDIT = ChannelCase.FADING_CDIT
CSIT = ChannelCase.FADING_CSIT

# optimum SE and energy per bit, frozen per case for the baseline scenario
FROZEN_OPTIMA = {
    STATIC: (8.85398734249235, 2.62560290717e-6),
    CDIT: (8.16244536778313, 2.88099106674e-6),
    CSIT: (8.16204050974836, 2.88005979425e-6),
}


def illustration_link(case=STATIC, **overrides):
    return make_link(case, mean_gain=ILLUSTRATION_GAIN, scenario=ILLUSTRATION, **overrides)


def test_link_params_validation():
    good = dict(BASELINE, case=STATIC, gain=FixedGain(BASELINE_MEAN_GAIN))
    LinkParams(**good)
    for bad in (
        dict(bandwidth_hz=0.0),
        dict(noise_power_w=-1e-15),
        dict(pa_efficiency=0.0),
        dict(pa_efficiency=1.5),
        dict(kappa=-1e-8),
        dict(p_static_w=0.0),
        dict(gain=NakagamiGain(1.0, BASELINE_MEAN_GAIN)),
    ):
        with pytest.raises(ValueError):
            LinkParams(**{**good, **bad})


def test_total_power_at_zero_is_the_static_draw():
    for case in ChannelCase:
        params = make_link(case)
        assert total_power(params, 0.0) == params.p_static_w


def test_total_power_closed_form_point():
    # 0.1 + 8e-8 * 1e4 + (1e-8/0.4) * (2 - 1) * 1e7 = 0.3508 W
    assert total_power(illustration_link(), 1.0) == pytest.approx(0.3508, rel=1e-12)


def test_zero_kappa_removes_the_rate_dependent_term():
    params = make_link(STATIC, kappa=0.0)
    amp = params.noise_power_w / params.pa_efficiency
    psi_term = amp * marginal_excess(STATIC, params.gain, 0.0)
    assert psi_term == 0.0
    want = amp * (2.0 ** 3 - 1.0) / BASELINE_MEAN_GAIN + params.p_static_w
    assert total_power(params, 3.0) == pytest.approx(want, rel=1e-12)


def test_ee_definition_and_sentinel():
    params = illustration_link()
    c = 2.0
    assert ee(params, c) == pytest.approx(total_power(params, c) / (1e4 * c), rel=1e-15)
    assert ee(params, 0.0) == math.inf
    assert ee(params, 1.015) == pytest.approx(3.51e-5, rel=1e-3)
    with pytest.raises(ValueError):
        ee(params, -1.0)


def test_decision_function_at_zero_is_minus_static_power():
    for case in ChannelCase:
        params = make_link(case)
        assert decision_function(params, 0.0) == -params.p_static_w


def test_decision_function_ignores_kappa_for_linear_circuits():
    for c in (0.5, 4.0, 9.0):
        values = {decision_function(make_link(STATIC, kappa=k), c) for k in (7e-8, 1e-7)}
        assert len(values) == 1


@pytest.mark.parametrize("case", list(ChannelCase))
def test_optimize_matches_frozen_optimum(case):
    result = optimize(make_link(case))
    c_star, ee_star = FROZEN_OPTIMA[case]
    assert result.c_star == pytest.approx(c_star, abs=5e-9)
    assert result.ee_star == pytest.approx(ee_star, rel=1e-9)
    assert result.final_bracket_width <= 1e-8
    # the bracket [0,1] doubles four times, then 31 halvings reach 1e-8
    assert result.iterations == 5 + math.ceil(math.log2(16.0 / 1e-8))


@pytest.mark.parametrize("case", list(ChannelCase))
def test_decision_sign_rule_straddles_the_optimum(case):
    params = make_link(case)
    c_star = optimize(params).c_star
    assert decision_function(params, c_star - 1e-8) < 0
    assert decision_function(params, c_star + 1e-8) > 0


def test_optimize_frozen_illustration_point():
    result = optimize(illustration_link())
    assert result.c_star == pytest.approx(1.01409420289, abs=5e-9)
    assert result.ee_star == pytest.approx(3.507759839e-5, rel=1e-9)


def test_optimize_respects_delta():
    params = illustration_link()
    coarse = optimize(params, delta=1e-4)
    assert coarse.final_bracket_width <= 1e-4
    assert coarse.c_star == pytest.approx(1.01409420289, abs=1e-4)
    with pytest.raises(ValueError):
        optimize(params, delta=0.0)


def test_optimize_exact_zero_shortcut():
    # p_static chosen so the decision function is float-exactly zero at the
    # second midpoint, 0.75, which the zero band must accept as the optimum
    target = float(marginal_excess(STATIC, FixedGain(1.0), 0.75))
    params = LinkParams(
        bandwidth_hz=1.0,
        noise_power_w=0.4,
        pa_efficiency=0.4,
        kappa=0.0,
        p_static_w=target,
        case=STATIC,
        gain=FixedGain(1.0),
    )
    result = optimize(params)
    assert result.c_star == 0.75
    assert result.final_bracket_width == 0.0
    assert result.iterations == 3


def test_optimize_reports_unreachable_optimum():
    with pytest.raises(SolverError, match="cap"):
        optimize(make_link(STATIC), c_max=4.0)


def test_limit_kappa_zero_matches_frozen_root():
    assert limit_se_kappa_zero(make_link(STATIC)) == pytest.approx(
        8.85398734249235, abs=5e-9
    )


@pytest.mark.parametrize("case", [STATIC, CSIT])
def test_limit_kappa_zero_equals_optimum_for_linear_circuits(case):
    params = make_link(case)
    assert abs(limit_se_kappa_zero(params) - optimize(params).c_star) <= 2e-8


def test_limit_kappa_zero_grows_with_static_power():
    lo = limit_se_kappa_zero(make_link(STATIC, p_static_w=0.1))
    hi = limit_se_kappa_zero(make_link(STATIC, p_static_w=0.3))
    assert hi > lo


def test_limit_noise_zero_matches_closed_form():
    params = make_link(STATIC, circuit=CircuitPowerModel.power_law(1.3))
    root = limit_se_noise_zero(params)
    assert root == pytest.approx(18.352184124, abs=1e-6)
    # invert kappa (alpha-1) (W C)**alpha = p_static directly; the default
    # bracket is only 1e-8 wide, so ask for a tighter one to compare
    closed = (0.188 / (0.3 * 9e-8)) ** (1.0 / 1.3) / 1e4
    assert limit_se_noise_zero(params, delta=1e-12) == pytest.approx(closed, rel=1e-10)
    hi = limit_se_noise_zero(make_link(
        STATIC, p_static_w=0.376, circuit=CircuitPowerModel.power_law(1.3)
    ))
    assert hi > root


def test_limit_noise_zero_requires_a_strictly_convex_circuit():
    with pytest.raises(SolverError):
        limit_se_noise_zero(make_link(STATIC))
    with pytest.raises(SolverError):
        limit_se_noise_zero(
            make_link(STATIC, kappa=0.0, circuit=CircuitPowerModel.power_law(1.3))
        )


def test_tradeoff_curve_contract():
    params = illustration_link()
    points = tradeoff_curve(params, [0.0])
    assert len(points) == 1
    assert points[0].ee_j_per_bit == math.inf
    assert points[0].total_power_w == params.p_static_w
    assert points[0].gamma_w == -params.p_static_w

    grid = np.linspace(0.1, 3.0, 30)
    curve = tradeoff_curve(params, grid)
    for point in curve:
        assert point.total_power_w > params.p_static_w
        assert point.ee_j_per_bit == pytest.approx(
            point.total_power_w / (params.bandwidth_hz * point.se), rel=1e-15
        )


def test_tradeoff_curve_is_u_shaped_around_the_optimum():
    params = illustration_link()
    c_star = optimize(params).c_star
    grid = np.linspace(0.1, 3.0, 30)
    ee_vals = np.array([p.ee_j_per_bit for p in tradeoff_curve(params, grid)])
    best = int(np.argmin(ee_vals))
    assert abs(grid[best] - c_star) <= (grid[1] - grid[0])
    assert np.all(np.diff(ee_vals[: best + 1]) < 0)
    assert np.all(np.diff(ee_vals[best:]) > 0)


def test_tradeoff_curve_rejects_bad_grids():
    params = illustration_link()
    for bad in ([], [1.0, 1.0], [2.0, 1.0], [-1.0, 2.0]):
        with pytest.raises(ValueError):
            tradeoff_curve(params, bad)


def test_grid_oracle_agrees_with_the_bisection():
    params = illustration_link()
    result = optimize(params)
    c_best, ee_best = grid_oracle(params, c_max=4.0, step=1e-3)
    assert abs(c_best - result.c_star) <= 1e-3
    assert result.ee_star <= ee_best <= result.ee_star * (1.0 + 1e-6)


def test_grid_oracle_validation():
    params = illustration_link()
    with pytest.raises(ValueError):
        grid_oracle(params, c_max=4.0, step=0.0)
    with pytest.raises(ValueError):
        grid_oracle(params, c_max=1e-4, step=1e-3)


def test_more_noise_hurts_efficiency_and_lowers_the_optimum():
    base = optimize(make_link(STATIC))
    worse = optimize(make_link(STATIC, noise_power_w=1e-14))
    assert worse.ee_star > base.ee_star
    assert worse.c_star < base.c_star


def test_more_static_power_raises_both_optima():
    base = optimize(make_link(CDIT))
    worse = optimize(make_link(CDIT, p_static_w=0.25))
    assert worse.ee_star > base.ee_star
    assert worse.c_star > base.c_star


def test_better_gain_helps_efficiency_and_raises_the_optimum():
    base = optimize(make_link(STATIC))
    better = optimize(make_link(STATIC, mean_gain=2.0 * BASELINE_MEAN_GAIN))
    assert better.ee_star < base.ee_star
    assert better.c_star > base.c_star


def test_kappa_shifts_the_optimum_only_for_convex_circuits():
    linear = [optimize(make_link(STATIC, kappa=k)).c_star for k in (7e-8, 1e-7)]
    assert abs(linear[0] - linear[1]) <= 2e-8
    convex = [
        optimize(make_link(STATIC, kappa=k, circuit=CircuitPowerModel.power_law(1.3))).c_star
        for k in (7e-8, 1e-7)
    ]
    assert convex[0] > convex[1]
    assert max(convex) < min(linear)

from __future__ import annotations

import math

import numpy as np
import pytest

from polarzf.evaluation.dof import dof_count
from polarzf.evaluation.rates import (
    SNR_HI,
    SNR_LO,
    RateCurve,
    asymptotic_snr_pair,
    estimate_muxg,
    has_residual_interference,
    muxg_slope,
    rate_curve,
    residual_covariances,
    sum_rate,
)
from polarzf.evaluation.sweep import NESTED_SUBSETS, dipole_sweep
from polarzf.geometry import Scenario, random_generic_scenario
from polarzf.polarization.dipoles import ELECTRIC_IN_PLANE, IN_PLANE_FOUR
from polarzf.zfdesign.assignment import assign_for_scenario, assign_nulling
from polarzf.zfdesign.design import design_zf
from polarzf.zfdesign.effective import effective_channels


@pytest.fixture(scope="module")
def electric_design():
    scenario = random_generic_scenario(5, seed=3, components=ELECTRIC_IN_PLANE)
    return design_zf(scenario, assign_for_scenario(scenario), allow_partial=True)


@pytest.fixture(scope="module")
def collinear_design():
    scenario = Scenario.build(
        [(0.0, 0.0), (5.0, 10.0)], [(10.0, 0.0), (20.0, 0.0)], tx_components=IN_PLANE_FOUR
    )
    return design_zf(scenario, assign_nulling(2, capacity=1), method="closed-form")


def test_sum_rate_without_signal():
    assert sum_rate([np.zeros((2, 2))] * 3, None, 1e6) == 0.0


@pytest.mark.parametrize("snr", [1.0, 10.0, 1e5])
def test_sum_rate_single_identity_user(snr):
    assert sum_rate([np.eye(2)], None, snr) == pytest.approx(2 * math.log2(1 + snr / 2))


def test_sum_rate_needs_positive_snr():
    with pytest.raises(ValueError, match="positive"):
        sum_rate([np.eye(2)], None, 0.0)


def test_sum_rate_of_diagonal_channels(four_dipole_design):
    snr = 1e4
    effective = effective_channels(four_dipole_design)
    residual = residual_covariances(four_dipole_design)
    expected = sum(
        math.log2(1 + snr / 6 * s**2) for e in effective for s in e.singular_values
    )
    assert sum_rate(effective, residual, snr) == pytest.approx(expected, abs=1e-6)


def test_residual_interference_lowers_the_rate():
    Lambda = [np.eye(2)] * 2
    residual = [np.eye(2)] * 2
    assert sum_rate(Lambda, residual, 100.0) < sum_rate(Lambda, None, 100.0)


def test_rate_curve_is_monotone(six_dipole_design):
    curve = rate_curve(six_dipole_design, [10.0**e for e in range(11)])
    assert curve.design_id == "nullspace"
    assert curve.scenario_id == six_dipole_design.scenario.identifier
    assert all(b >= a for a, b in zip(curve.rates, curve.rates[1:]))


def test_rate_curve_requires_increasing_snrs():
    with pytest.raises(ValueError, match="increasing"):
        RateCurve(((10.0, 1.0), (10.0, 2.0)))


def test_muxg_slope():
    curve = RateCurve(((SNR_LO, 10.0), (SNR_HI, 10.0 + 6 * math.log2(100))))
    estimate = muxg_slope(curve)
    assert estimate.gamma_hat == pytest.approx(6.0)
    assert curve.rate_at(SNR_HI) is not None
    assert curve.rate_at(1.0) is None
    with pytest.raises(ValueError, match="on the curve"):
        muxg_slope(curve, 1.0, SNR_HI)
    with pytest.raises(ValueError, match="snr_hi > snr_lo"):
        muxg_slope(curve, SNR_HI, SNR_LO)


def test_certified_designs_reach_2k(four_dipole_design, six_dipole_design):
    for design, K in ((four_dipole_design, 3), (six_dipole_design, 5)):
        estimate = estimate_muxg(design)
        assert estimate.gamma_hat == pytest.approx(2 * K, rel=0.02)
        assert estimate.gamma_hat <= 2 * K + 0.01
        assert not estimate.residual_interference


def test_zero_gain_user_loses_two(collinear_design):
    assert estimate_muxg(collinear_design).gamma_hat == pytest.approx(2.0, rel=0.02)


def test_saturating_rate(electric_design):
    assert has_residual_interference(electric_design)
    estimate = estimate_muxg(electric_design)
    assert estimate.residual_interference
    assert estimate.gamma_hat < 0.98 * 10


def test_asymptotic_snr_pair(six_dipole_design):
    lo, hi = asymptotic_snr_pair(six_dipole_design)
    assert lo >= SNR_LO
    assert hi == pytest.approx(100 * lo)


def test_dof_count(four_dipole_design, six_dipole_design, electric_design):
    assert dof_count(four_dipole_design) == 6
    assert dof_count(six_dipole_design) == 10
    assert dof_count(electric_design) < 10


def test_dof_count_single_user():
    scenario = random_generic_scenario(1, seed=6)
    assert dof_count(design_zf(scenario, assign_nulling(1))) == 2


def test_dof_count_of_collinear_design(collinear_design):
    assert dof_count(collinear_design) == 2


def test_dof_agrees_with_gamma_hat(six_dipole_design):
    dof = dof_count(six_dipole_design)
    assert estimate_muxg(six_dipole_design).gamma_hat == pytest.approx(dof, rel=0.02)


def test_dipole_sweep():
    table = dipole_sweep(K=5, trials=2, seed=0)
    assert [row.size for row in table.rows] == [2, 3, 4, 5, 6]
    assert [row.components for row in table.rows] == list(NESTED_SUBSETS)
    assert table[6].dofs == (10, 10)
    assert table[2].mean_dof < 10
    assert table[2].max_dof <= table[6].min_dof


def test_dipole_sweep_is_nondecreasing():
    table = dipole_sweep(K=5, trials=3, seed=2)
    assert table.is_monotone
    means = [row.mean_dof for row in table.rows]
    assert means == sorted(means)
    # two electric dipoles fall short of 2K on every placement, not just on average
    assert all(dof < 10 for dof in table[2].dofs)
    assert table[6].dofs == (10, 10, 10)


def test_dipole_sweep_needs_trials():
    with pytest.raises(ValueError, match="trial"):
        dipole_sweep(trials=0)


if __name__ == "__main__":
    pytest.main([__file__])

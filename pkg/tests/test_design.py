from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import subspace_angles

from polarzf.evaluation.dof import dof_count
from polarzf.exceptions import InfeasibleAssignmentError
from polarzf.geometry import Scenario, random_generic_scenario
from polarzf.polarization.dipoles import IN_PLANE_FOUR
from polarzf.zfdesign.assignment import assign_for_scenario, assign_nulling
from polarzf.zfdesign.design import LEAKAGE_TOL, design_zf, fixed_design, relative_leakage
from polarzf.zfdesign.effective import effective_channels, printed_dual_lambda


def test_four_dipole_design(four_dipole_design):
    design = four_dipole_design
    assert design.certified
    assert len(design.leakage) == 6
    assert design.zero_gain_users == ()
    for channel in effective_channels(design):
        tol = 1e-8 * np.abs(channel.Lambda).max()
        assert np.linalg.matrix_rank(channel.Lambda, tol=tol) == 2
    for beamformer in (*design.tx_beamformers, *design.rx_beamformers):
        assert beamformer.orthonormality_error() <= 1e-12
        assert beamformer.source == "nullspace"


def test_closed_form_matches_null_space(four_dipole_scenario, four_dipole_design):
    closed = design_zf(
        four_dipole_scenario, four_dipole_design.assignment, method="closed-form"
    )
    assert closed.certified
    for i in range(3):
        assert closed.tx_beamformers[i].source == "closed-form"
        assert subspace_angles(closed.V(i), four_dipole_design.V(i)).max() < 1e-9
        assert subspace_angles(closed.U(i), four_dipole_design.U(i)).max() < 1e-9


def test_lambda_is_scalar_for_single_nulls(four_dipole_scenario):
    assignment = assign_for_scenario(four_dipole_scenario)
    design = design_zf(four_dipole_scenario, assignment, method="closed-form")
    for channel in effective_channels(design):
        check = channel.closed_form
        assert check is not None
        assert check.kind == "lambda"
        assert check.mismatch <= 1e-10
        np.testing.assert_allclose(channel.Lambda, check.expected * np.eye(2), atol=1e-12)


def test_six_dipole_design(six_dipole_design):
    design = six_dipole_design
    assert design.certified
    assert len(design.assignment.assigned) == 20
    assert design.leakage_max <= LEAKAGE_TOL
    gamma_checks = [c.closed_form for c in effective_channels(design) if c.closed_form]
    assert len(gamma_checks) == 5
    assert all(check.kind == "gamma" and check.mismatch <= 1e-8 for check in gamma_checks)


def test_printed_dual_lambda(six_dipole_scenario, six_dipole_design):
    assignment = six_dipole_design.assignment
    for i in range(5):
        Lambda, expected = printed_dual_lambda(
            six_dipole_scenario, assignment.nulled_by_tx(i), assignment.nulled_by_rx(i), i
        )
        atol = 1e-8 * abs(expected)
        np.testing.assert_allclose(Lambda, expected * np.eye(2), atol=atol)


def test_two_antenna_design():
    scenario = random_generic_scenario(7, 2, seed=3, min_angle_sep=0.005)
    design = design_zf(scenario, assign_nulling(7, 2))
    assert design.certified
    assert design.V(0).shape == (12, 2)


def test_incomplete_assignment():
    scenario = random_generic_scenario(7, 1, seed=3, min_angle_sep=0.005)
    assignment = assign_for_scenario(scenario)
    with pytest.raises(InfeasibleAssignmentError, match="unassigned"):
        design_zf(scenario, assignment)
    partial = design_zf(scenario, assignment, allow_partial=True)
    assert not partial.certified
    assert partial.nulling_certified


def test_assignment_size_mismatch(four_dipole_scenario):
    with pytest.raises(ValueError, match="K=5"):
        design_zf(four_dipole_scenario, assign_nulling(5))


def test_collinear_receiver_loses_its_gain():
    scenario = Scenario.build(
        [(0.0, 0.0), (5.0, 10.0)], [(10.0, 0.0), (20.0, 0.0)], tx_components=IN_PLANE_FOUR
    )
    design = design_zf(scenario, assign_nulling(2, capacity=1), method="closed-form")
    assert 0 in design.zero_gain_users
    np.testing.assert_allclose(design.direct_gains[0], 0, atol=1e-15)


def test_workers_do_not_change_the_design(six_dipole_scenario, six_dipole_design):
    threaded = design_zf(six_dipole_scenario, six_dipole_design.assignment, workers=4)
    for i in range(5):
        np.testing.assert_array_equal(threaded.V(i), six_dipole_design.V(i))
        np.testing.assert_array_equal(threaded.U(i), six_dipole_design.U(i))


def test_scaling_keeps_the_nulls(four_dipole_scenario, four_dipole_design):
    scaled = four_dipole_scenario.scaled(10.0)
    design = design_zf(scaled, four_dipole_design.assignment)
    assert design.certified


@pytest.mark.parametrize("factor", [0.1, 10.0, 250.0])
def test_dof_is_scale_invariant(six_dipole_scenario, six_dipole_design, factor):
    scaled = six_dipole_scenario.scaled(factor)
    design = design_zf(scaled, six_dipole_design.assignment)
    assert dof_count(design) == dof_count(six_dipole_design) == 10


def test_fixed_design_checks_lengths(four_dipole_scenario, four_dipole_design):
    eye = [np.eye(4)[:, :2]] * 2
    with pytest.raises(ValueError, match="Expected 3"):
        fixed_design(four_dipole_scenario, four_dipole_design.assignment, eye, eye)


def test_identity_beamformers_leak(six_dipole_scenario, six_dipole_design):
    eye = [np.eye(6)[:, :2]] * 5
    design = fixed_design(six_dipole_scenario, six_dipole_design.assignment, eye, eye)
    assert not design.nulling_certified
    assert design.tx_beamformers[0].source == "identity"


def test_relative_leakage_edge_cases():
    zero = np.zeros((2, 2))
    eye = np.eye(2)
    assert relative_leakage(zero, zero, eye, eye, eye) == 0.0
    assert relative_leakage(eye, zero, eye, eye, eye) == float("inf")
    assert relative_leakage(eye, 2 * eye, eye, eye, eye) == pytest.approx(0.5)


if __name__ == "__main__":
    pytest.main([__file__])

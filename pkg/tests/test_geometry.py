from __future__ import annotations

import math

import numpy as np
import pytest

from polarzf.exceptions import (
    DegenerateGeometryError,
    NonGenericGeometryError,
    ScenarioValidationError,
)
from polarzf.geometry import (
    Scenario,
    genericity_margin,
    genericity_margin_from_angles,
    link_geometry,
    random_generic_scenario,
    suggested_min_angle_sep,
)


@pytest.mark.parametrize(
    ("tx", "rx", "phi", "r"),
    [
        ((0.0, 0.0), (1.0, 0.0), 0.0, 1.0),
        ((0.0, 0.0), (0.0, 2.0), math.pi / 2, 2.0),
        ((1.0, 1.0), (2.0, 2.0), math.pi / 4, math.sqrt(2)),
    ],
)
def test_link_geometry(tx, rx, phi, r):
    scenario = Scenario.build([tx], [rx])
    link = link_geometry(scenario, 0, 0)
    assert link.phi == pytest.approx(phi)
    assert link.r == pytest.approx(r)
    assert link.a == pytest.approx(1 / r)


def test_link_angles_lie_in_full_turn():
    scenario = Scenario.build([(0.0, 0.0), (5.0, 5.0)], [(-3.0, -1.0), (4.0, -2.0)])
    angles = scenario.link_angles()
    assert np.all((angles >= 0) & (angles < 2 * math.pi))
    assert angles[0, 0] == pytest.approx(link_geometry(scenario, 0, 0).phi)
    assert angles[1, 0] == pytest.approx(link_geometry(scenario, 1, 0).phi)


def test_tiny_negative_angle_wraps_to_zero():
    # atan2 gives -1e-17, which the modulo rounds up to exactly 2*pi
    scenario = Scenario.build([(0.0, 0.0)], [(1.0, -1e-17)])
    phi = link_geometry(scenario, 0, 0).phi
    assert 0.0 <= phi < 2 * math.pi
    assert phi == 0.0
    angles = scenario.link_angles()
    assert 0.0 <= angles[0, 0] < 2 * math.pi


@pytest.mark.parametrize("factor", [0.25, 3.5, 40.0])
def test_distances_scale_with_positions(factor):
    scenario = random_generic_scenario(3, seed=5)
    scaled = scenario.scaled(factor)
    for i in range(3):
        for j in range(3):
            link, far = link_geometry(scenario, i, j), link_geometry(scaled, i, j)
            assert far.r == pytest.approx(factor * link.r)
            assert far.a == pytest.approx(link.a / factor)
            assert far.phi == pytest.approx(link.phi)


def test_subset_renumbers_users():
    scenario = random_generic_scenario(5, seed=3)
    subset = scenario.subset([4, 1])
    assert subset.K == 2
    assert subset.tx_positions == (scenario.tx_positions[4], scenario.tx_positions[1])
    assert subset.rx_positions[1] == scenario.rx_positions[1]
    assert subset.link_angles()[0, 1] == pytest.approx(scenario.link_angles()[4, 1])


@pytest.mark.parametrize(("users", "error"), [([1, 1], ValueError), ([0, 5], IndexError)])
def test_invalid_subset(users, error):
    with pytest.raises(error):
        random_generic_scenario(5, seed=3).subset(users)


def test_reverse_direction_differs_by_pi():
    scenario = Scenario.build([(1.0, 2.0)], [(4.0, 6.0)])
    reverse = Scenario.build([(4.0, 6.0)], [(1.0, 2.0)])
    forward_phi = link_geometry(scenario, 0, 0).phi
    backward_phi = link_geometry(reverse, 0, 0).phi
    assert (backward_phi - forward_phi) % (2 * math.pi) == pytest.approx(math.pi)


def test_link_index_out_of_range():
    scenario = Scenario.build([(0.0, 0.0)], [(1.0, 0.0)])
    with pytest.raises(IndexError):
        link_geometry(scenario, 0, 1)


def test_colocated_nodes_are_rejected():
    with pytest.raises(DegenerateGeometryError):
        Scenario.build([(0.0, 0.0), (1.0, 1.0)], [(2.0, 2.0), (0.0, 0.0)])


def test_invalid_wavenumber():
    with pytest.raises(ScenarioValidationError) as exc_info:
        Scenario.build([(0.0, 0.0)], [(1.0, 0.0)], wavenumber=-1.0)
    assert exc_info.value.field == "wavenumber"


def test_default_array_offsets():
    scenario = Scenario.build([(0.0, 0.0)], [(1.0, 0.0)], M=3)
    assert scenario.antenna_offsets[0] == (0.0, 0.0)
    spacing = math.pi / scenario.wavenumber
    assert scenario.antenna_offsets[2][0] == pytest.approx(2 * spacing)


def test_random_generic_scenario():
    scenario = random_generic_scenario(3, 1, seed=7, min_angle_sep=0.05)
    assert scenario.K == 3
    assert genericity_margin(scenario) >= 0.05
    assert scenario == random_generic_scenario(3, 1, seed=7, min_angle_sep=0.05)
    assert scenario != random_generic_scenario(3, 1, seed=8, min_angle_sep=0.05)


def test_single_pair_is_always_generic():
    scenario = random_generic_scenario(1, seed=123)
    assert genericity_margin(scenario) == pytest.approx(math.pi / 2)


def test_resample_budget_exhausted():
    with pytest.raises(NonGenericGeometryError):
        random_generic_scenario(5, seed=0, min_angle_sep=1.5, budget=5)


def test_collinear_nodes_have_zero_margin():
    scenario = Scenario.build([(0.0, 0.0), (2.0, 0.0)], [(1.0, 0.0), (3.0, 0.0)])
    assert genericity_margin(scenario) == 0.0


def test_margin_from_angles():
    angles = np.array([[0.0, math.pi / 2], [math.pi / 2, 0.0]])
    assert genericity_margin_from_angles(angles) == pytest.approx(math.pi / 2)


def test_margin_is_invariant_under_scaling_and_rotation():
    scenario = random_generic_scenario(4, seed=2)
    margin = genericity_margin(scenario)
    assert genericity_margin(scenario.scaled(3.5)) == pytest.approx(margin, abs=1e-9)
    assert genericity_margin(scenario.rotated(0.4)) == pytest.approx(margin, abs=1e-9)
    np.testing.assert_allclose(scenario.scaled(3.5).link_angles(), scenario.link_angles())


def test_suggested_min_angle_sep():
    assert suggested_min_angle_sep(3) == 0.05
    assert suggested_min_angle_sep(5) == 0.05
    assert suggested_min_angle_sep(10) == pytest.approx(5e-4)


if __name__ == "__main__":
    pytest.main([__file__])

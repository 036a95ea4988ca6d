from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.linalg import subspace_angles

from polarzf.exceptions import DegenerateDirectionError
from polarzf.geometry import LinkGeometry
from polarzf.polarization.channels import single_antenna_channel
from polarzf.polarization.dipoles import FULL, IN_PLANE_FOUR
from polarzf.zfdesign import closedform
from polarzf.zfdesign.nullspace import nullspace_basis


def channel(phi: float, config=FULL) -> np.ndarray:
    link = LinkGeometry(0, 1, phi, 1.0, 1.0)
    return single_antenna_channel(link, config, config, 0.0).matrix


def test_tx_single_at_right_angle():
    V = closedform.closed_form_tx_single(math.pi / 2)
    np.testing.assert_allclose(V, [[0, 0], [1, 0], [0, 0], [0, 1]], atol=1e-15)


def test_rx_single_at_zero():
    U = closedform.closed_form_rx_single(0.0)
    np.testing.assert_array_equal(U, [[1, 0], [0, 0], [0, 1], [0, 0]])


@pytest.mark.parametrize("phi", [0.3, 1.9, 4.4])
def test_single_null(phi):
    V = closedform.closed_form_tx_single(phi)
    np.testing.assert_allclose(channel(phi, IN_PLANE_FOUR) @ V, 0, atol=1e-14)
    U = closedform.closed_form_rx_single(phi)
    np.testing.assert_allclose(U.T @ channel(phi, IN_PLANE_FOUR), 0, atol=1e-14)
    np.testing.assert_allclose(V.T @ V, np.eye(2), atol=1e-15)


@pytest.mark.parametrize(("phi_a", "phi_b"), [(0.2, 1.5), (3.0, 5.1), (0.1, 2.9)])
def test_dual_null(phi_a, phi_b):
    V = closedform.closed_form_tx_dual(phi_a, phi_b)
    np.testing.assert_allclose(channel(phi_a) @ V, 0, atol=1e-14)
    np.testing.assert_allclose(channel(phi_b) @ V, 0, atol=1e-14)
    np.testing.assert_allclose(V.T @ V, np.eye(2), atol=1e-14)
    U = closedform.closed_form_rx_dual(phi_a, phi_b)
    np.testing.assert_allclose(U.T @ channel(phi_a), 0, atol=1e-14)


def test_dual_null_columns_split_the_polarizations():
    phi_a, phi_b = 0.7, 2.0
    V = closedform.closed_form_tx_dual(phi_a, phi_b, normalization="printed")
    for phi in (phi_a, phi_b):
        rows = channel(phi)
        vertical = np.array([0, 0, 1, math.sin(phi), -math.cos(phi), 0])
        horizontal = np.array([math.sin(phi), -math.cos(phi), 0, 0, 0, -1])
        assert vertical @ V[:, 1] == pytest.approx(0, abs=1e-15)
        assert horizontal @ V[:, 0] == pytest.approx(0, abs=1e-15)
        expected = np.outer(vertical, vertical) + np.outer(horizontal, horizontal)
        np.testing.assert_allclose(rows, expected, atol=1e-15)


def test_printed_normalization():
    assert closedform.printed_dual_normalization(0.0, math.pi / 2) == pytest.approx(
        1 / math.sqrt(2)
    )
    V = closedform.closed_form_tx_dual(0.0, math.pi / 2, normalization="printed")
    unit = closedform.closed_form_tx_dual(0.0, math.pi / 2)
    assert subspace_angles(V, unit).max() < 1e-12


def test_uncorrected_form_leaks():
    phi_a, phi_b = 0.4, 1.7
    leak = channel(phi_a) @ closedform.uncorrected_tx_dual(phi_a, phi_b)
    assert np.linalg.norm(leak) > 0.1 * abs(math.sin(phi_a - phi_b))


def test_coinciding_directions():
    with pytest.raises(DegenerateDirectionError):
        closedform.closed_form_tx_dual(0.3, 0.3 + math.pi)
    with pytest.raises(DegenerateDirectionError):
        closedform.closed_form_rx_dual(1.0, 1.0)


def test_closed_forms_span_the_null_space():
    rng = np.random.default_rng(0)
    for phi_a, phi_b in rng.uniform(0, 2 * math.pi, size=(50, 2)):
        if abs(math.sin(phi_a - phi_b)) < 0.05:
            continue
        basis = nullspace_basis([channel(phi_a), channel(phi_b)], 6)
        V = closedform.closed_form_tx_dual(phi_a, phi_b)
        assert subspace_angles(V, basis).max() < 1e-9
        single = nullspace_basis([channel(phi_a, IN_PLANE_FOUR)], 4)
        V = closedform.closed_form_tx_single(phi_a)
        assert subspace_angles(V, single).max() < 1e-9


def test_lambda_gain():
    assert closedform.lambda_gain(math.pi / 4, 0.0, math.pi / 2) == pytest.approx(-0.5)
    assert closedform.lambda_gain(1.0, 1.0, 2.0) == 0.0


def test_gamma_gain_matches_the_channel():
    phi_ii, tx_a, tx_b, rx_a, rx_b = 0.9, 2.1, 4.0, 0.1, 5.5
    V = closedform.closed_form_tx_dual(tx_a, tx_b, normalization="printed")
    U = closedform.closed_form_rx_dual(rx_a, rx_b, normalization="printed")
    Lambda = U.T @ channel(phi_ii) @ V
    scale = closedform.printed_dual_normalization(tx_a, tx_b)
    scale *= closedform.printed_dual_normalization(rx_a, rx_b)
    expected = closedform.gamma_gain(phi_ii, tx_a, tx_b, rx_a, rx_b) * scale
    np.testing.assert_allclose(Lambda, expected * np.eye(2), atol=1e-14)


if __name__ == "__main__":
    pytest.main([__file__])

"""Closed-form zero-forcing beamformers for a single polarimetric antenna.

Single-null forms act on the (E_x, E_y, M_x, M_y) layout, dual-null forms on
all six components in global order. The dual-null matrices carry a sign
correction on the M_z entry of their first column; `uncorrected_tx_dual`
keeps the uncorrected variant, which does not null the horizontal field.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from polarzf.exceptions import DegenerateDirectionError


DIRECTION_ATOL = 1e-12

type Normalization = Literal["unit", "printed"]


def _single_null(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, 0.0], [s, 0.0], [0.0, c], [0.0, s]])


def closed_form_tx_single(phi_ij: float) -> np.ndarray:
    """4 x 2 precoder of a transmitter nulling its link at angle `phi_ij`."""
    return _single_null(phi_ij)


def closed_form_rx_single(phi_ki: float) -> np.ndarray:
    """4 x 2 combiner of a receiver nulling the interferer arriving at angle `phi_ki`."""
    return _single_null(phi_ki)


def printed_dual_normalization(phi_a: float, phi_b: float) -> float:
    """The 1/sqrt(1 + sin^2(phi_a - phi_b)) scale of the published dual-null form."""
    return 1.0 / math.sqrt(1.0 + math.sin(phi_a - phi_b) ** 2)


def dual_column_norm(phi_a: float, phi_b: float) -> float:
    """Euclidean length of either unscaled dual-null column."""
    delta = phi_a - phi_b
    return math.sqrt(2.0 - 2.0 * math.cos(delta) + math.sin(delta) ** 2)


def _dual_columns(phi_a: float, phi_b: float, m_z_sign: float) -> np.ndarray:
    delta = math.sin(phi_a - phi_b)
    if abs(delta) < DIRECTION_ATOL:
        msg = f"Nulling directions {phi_a:.6f} and {phi_b:.6f} coincide modulo pi"
        raise DegenerateDirectionError(msg)
    dc = math.cos(phi_a) - math.cos(phi_b)
    ds = math.sin(phi_a) - math.sin(phi_b)
    return np.array([
        [dc, 0.0],
        [ds, 0.0],
        [0.0, delta],
        [0.0, dc],
        [0.0, ds],
        [m_z_sign * delta, 0.0],
    ])


def _scaled(
    columns: np.ndarray, phi_a: float, phi_b: float, normalization: Normalization
) -> np.ndarray:
    if normalization == "printed":
        return columns * printed_dual_normalization(phi_a, phi_b)
    return columns / dual_column_norm(phi_a, phi_b)


def closed_form_tx_dual(
    phi_ij: float,
    phi_ik: float,
    normalization: Normalization = "unit",
) -> np.ndarray:
    """6 x 2 precoder nulling the links to two receivers at `phi_ij` and `phi_ik`.

    Args:
        phi_ij: Angle of the first nulled link
        phi_ik: Angle of the second nulled link
        normalization: "unit" for orthonormal columns, "printed" for the
            1/sqrt(1 + sin^2) scale

    Raises:
        DegenerateDirectionError: If the two angles coincide modulo pi
    """
    return _scaled(_dual_columns(phi_ij, phi_ik, -1.0), phi_ij, phi_ik, normalization)


def closed_form_rx_dual(
    phi_li: float,
    phi_mi: float,
    normalization: Normalization = "unit",
) -> np.ndarray:
    """6 x 2 combiner nulling the interferers arriving at `phi_li` and `phi_mi`.

    The channel is symmetric in its pattern rows, so the combiner has the
    precoder's form in the interferers' angles.
    """
    return _scaled(_dual_columns(phi_li, phi_mi, -1.0), phi_li, phi_mi, normalization)


def uncorrected_tx_dual(phi_ij: float, phi_ik: float) -> np.ndarray:
    """Dual-null precoder with +sin(phi_ij - phi_ik) as M_z entry, printed scale."""
    return _scaled(_dual_columns(phi_ij, phi_ik, 1.0), phi_ij, phi_ik, "printed")


def lambda_gain(phi_ii: float, phi_ij: float, phi_ki: float) -> float:
    """Direct gain left by single-null beamformers at both ends of link i."""
    return math.sin(phi_ii - phi_ij) * math.sin(phi_ii - phi_ki)


def gamma_factor(phi: float, phi_a: float, phi_b: float) -> float:
    """Projection of a dual-null column onto the direct link at angle `phi`."""
    return math.sin(phi - phi_a) - math.sin(phi - phi_b) + math.sin(phi_a - phi_b)


def gamma_gain(
    phi_ii: float,
    phi_ij: float,
    phi_ik: float,
    phi_li: float,
    phi_mi: float,
) -> float:
    """Direct gain left by unscaled dual-null beamformers at both ends of link i."""
    return gamma_factor(phi_ii, phi_ij, phi_ik) * gamma_factor(phi_ii, phi_li, phi_mi)

"""Line-of-sight polarization channel matrices."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses

import numpy as np

from polarzf.geometry import DEFAULT_WAVENUMBER, LinkGeometry, Scenario, link_geometry
from polarzf.polarization.dipoles import DipoleConfig
from polarzf.polarization.patterns import azimuth_rows


RANK_RTOL = 1e-8
"""A singular value counts as nonzero iff it exceeds RANK_RTOL times the largest one."""


@dataclasses.dataclass(frozen=True)
class PolarizationChannel:
    """Channel from transmitter `tx` to receiver `rx`; rows index receive components."""

    matrix: np.ndarray
    tx: int
    rx: int
    geometry: LinkGeometry

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def rank(self) -> int:
        return numerical_rank(self.matrix)


def numerical_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Number of singular values above `rtol` times the largest."""
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def single_antenna_channel(
    link: LinkGeometry,
    tx_cfg: DipoleConfig,
    rx_cfg: DipoleConfig,
    wavenumber: float = DEFAULT_WAVENUMBER,
) -> PolarizationChannel:
    """c_rx x c_tx channel between two single polarimetric antennas.

    H = a e^{-jkr} (v_rx^T v_tx + h_rx^T h_tx) with both sides evaluated at the
    link angle.
    """
    tx_rows = azimuth_rows(tx_cfg, link.phi)
    rx_rows = azimuth_rows(rx_cfg, link.phi)
    shape = np.outer(rx_rows.a_theta, tx_rows.a_theta)
    shape += np.outer(rx_rows.a_phi, tx_rows.a_phi)
    gain = link.a * np.exp(-1j * wavenumber * link.r)
    return PolarizationChannel(gain * shape, tx=link.tx, rx=link.rx, geometry=link)


def array_phases(
    link: LinkGeometry,
    offsets: Sequence[Sequence[float]],
    wavenumber: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Plane-wave phases (transmit, receive) of each array element along the link."""
    projection = np.asarray(offsets, dtype=float) @ link.direction
    return np.exp(1j * wavenumber * projection), np.exp(-1j * wavenumber * projection)


def array_channel(
    link: LinkGeometry,
    tx_cfg: DipoleConfig,
    rx_cfg: DipoleConfig,
    offsets: Sequence[Sequence[float]],
    wavenumber: float,
) -> PolarizationChannel:
    """(M c_rx) x (M c_tx) channel of two M-antenna arrays, antenna-major ordering.

    The phase matrix p_rx p_tx^T has rank one, so the Kronecker product keeps
    the rank of the single-antenna channel.
    """
    single = single_antenna_channel(link, tx_cfg, rx_cfg, wavenumber)
    if len(offsets) == 1:
        return single
    p_tx, p_rx = array_phases(link, offsets, wavenumber)
    matrix = np.kron(np.outer(p_rx, p_tx), single.matrix)
    return dataclasses.replace(single, matrix=matrix)


def scenario_channel(scenario: Scenario, i: int, j: int) -> PolarizationChannel:
    """Channel from transmitter `i` to receiver `j` of `scenario`."""
    return array_channel(
        link_geometry(scenario, i, j),
        scenario.tx_components[i],
        scenario.rx_components[j],
        scenario.antenna_offsets,
        scenario.wavenumber,
    )


def scenario_channels(scenario: Scenario) -> dict[tuple[int, int], PolarizationChannel]:
    """All K^2 link channels keyed by (tx, rx)."""
    return {
        (i, j): scenario_channel(scenario, i, j)
        for i in range(scenario.K)
        for j in range(scenario.K)
    }

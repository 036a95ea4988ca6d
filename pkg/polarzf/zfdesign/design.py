"""Zero-forcing designs for all 2K nodes of a scenario."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import dataclasses
from typing import Literal

import logfire
import numpy as np

from polarzf import telemetry
from polarzf.exceptions import InfeasibleAssignmentError
from polarzf.geometry import Scenario, genericity_margin
from polarzf.polarization.channels import (
    RANK_RTOL,
    PolarizationChannel,
    scenario_channels,
)
from polarzf.polarization.dipoles import COMPONENT_ORDER, IN_PLANE_FOUR
from polarzf.zfdesign import closedform
from polarzf.zfdesign.assignment import NullingAssignment
from polarzf.zfdesign.nullspace import Beamformer, Source, nullspace_beamformer


logger = telemetry.get_logger(__name__)

LEAKAGE_TOL = 1e-10
"""Relative leakage at or below which a nulled link counts as certified."""

type Method = Literal["nullspace", "closed-form"]
type Channels = dict[tuple[int, int], PolarizationChannel]


@dataclasses.dataclass(frozen=True, eq=False)
class ZFDesign:
    """Precoders, combiners and leakage report of one scenario."""

    scenario: Scenario
    assignment: NullingAssignment
    method: str
    tx_beamformers: tuple[Beamformer, ...]
    rx_beamformers: tuple[Beamformer, ...]
    leakage: dict[tuple[int, int], float]
    """Relative leakage of every cross link."""
    direct_gains: tuple[np.ndarray, ...]
    """Singular values of each user's effective direct channel."""
    zero_gain_users: tuple[int, ...] = ()

    def V(self, i: int) -> np.ndarray:
        return self.tx_beamformers[i].matrix

    def U(self, j: int) -> np.ndarray:
        return self.rx_beamformers[j].matrix

    @property
    def leakage_max(self) -> float:
        """Largest relative leakage over the assigned links."""
        return max((self.leakage[link] for link in self.assignment.assigned), default=0.0)

    @property
    def nulling_certified(self) -> bool:
        return self.leakage_max <= LEAKAGE_TOL

    @property
    def certified(self) -> bool:
        return self.assignment.complete and self.nulling_certified


def relative_leakage(
    H_cross: np.ndarray,
    H_direct: np.ndarray,
    U_rx: np.ndarray,
    V_tx: np.ndarray,
    U_own: np.ndarray,
) -> float:
    """||U_rx* H_cross V_tx|| relative to the direct ||U_own* H_direct V_tx||."""
    leak = np.linalg.norm(U_rx.conj().T @ H_cross @ V_tx)
    direct = np.linalg.norm(U_own.conj().T @ H_direct @ V_tx)
    if direct == 0:
        return 0.0 if leak == 0 else float("inf")
    return float(leak / direct)


def direct_singular_values(channels: Channels, V: np.ndarray, U: np.ndarray, i: int):
    return np.linalg.svd(U.conj().T @ channels[i, i].matrix @ V, compute_uv=False)


def zero_gain(gains: np.ndarray, H_direct: np.ndarray) -> bool:
    """Whether some stream gain vanishes relative to the unbeamformed direct link."""
    reference = np.linalg.norm(H_direct, 2)
    return bool(np.any(gains <= RANK_RTOL * reference))


def _tx_closed_form(scenario: Scenario, angles: np.ndarray, i: int, targets: list[int]):
    cfg = scenario.tx_components[i]
    if scenario.M != 1:
        return None
    if cfg.is_layout(IN_PLANE_FOUR.components) and len(targets) == 1:
        return closedform.closed_form_tx_single(angles[i, targets[0]])
    if cfg.is_layout(COMPONENT_ORDER) and len(targets) == 2:
        first, second = targets
        return closedform.closed_form_tx_dual(angles[i, first], angles[i, second])
    return None


def _rx_closed_form(scenario: Scenario, angles: np.ndarray, j: int, sources: list[int]):
    cfg = scenario.rx_components[j]
    if scenario.M != 1:
        return None
    if cfg.is_layout(IN_PLANE_FOUR.components) and len(sources) == 1:
        return closedform.closed_form_rx_single(angles[sources[0], j])
    if cfg.is_layout(COMPONENT_ORDER) and len(sources) == 2:
        first, second = sources
        return closedform.closed_form_rx_dual(angles[first, j], angles[second, j])
    return None


def design_zf(
    scenario: Scenario,
    assignment: NullingAssignment,
    *,
    method: Method = "nullspace",
    allow_partial: bool = False,
    workers: int | None = None,
) -> ZFDesign:
    """Design precoders and combiners that null every assigned cross link.

    Transmitters are designed first; each receiver is then steered toward its
    direct link through the chosen precoder.

    Args:
        scenario: The scenario to design for
        assignment: Nulling side of every cross link
        method: "nullspace" for SVD null spaces everywhere, "closed-form" to use
            the single/dual-null closed forms where a node's layout allows
        allow_partial: Accept an incomplete assignment (best-effort design)
        workers: Threads for the per-node computations

    Raises:
        InfeasibleAssignmentError: If the assignment is incomplete and
            `allow_partial` is False
        InfeasibleNullingError: If a node cannot null its assigned links
    """
    if assignment.K != scenario.K:
        msg = f"Assignment for K={assignment.K} used with a K={scenario.K} scenario"
        raise ValueError(msg)
    if not assignment.complete and not allow_partial:
        links = scenario.K * (scenario.K - 1)
        msg = (
            f"{len(assignment.unassigned)} of {links} cross links "
            f"unassigned (capacity {assignment.capacity} per node, K={scenario.K})"
        )
        raise InfeasibleAssignmentError(msg)
    with logfire.span(
        "design zero-forcing beamformers",
        users=scenario.K,
        antennas=scenario.M,
        method=method,
    ):
        channels = scenario_channels(scenario)
        angles = scenario.link_angles()
        margin = genericity_margin(scenario)
        closed_form = method == "closed-form"
        if margin == 0:
            logger.warning("Degenerate placement of %s (margin 0)", scenario.identifier)

        def design_tx(i: int) -> Beamformer:
            targets = assignment.nulled_by_tx(i)
            dim = scenario.M * scenario.tx_components[i].size
            matrix = None
            if closed_form:
                matrix = _tx_closed_form(scenario, angles, i, targets)
            source: Source = "closed-form"
            if matrix is None:
                stacked = [channels[i, j] for j in targets]
                toward = channels[i, i].matrix
                matrix = nullspace_beamformer(stacked, dim, side="tx", toward=toward)
                source = "nullspace"
            logger.debug("tx %d nulls %s via %s", i, targets, source)
            return Beamformer(matrix.astype(complex), i, "tx", tuple(targets), source)

        def design_rx(j: int, V: np.ndarray) -> Beamformer:
            sources = assignment.nulled_by_rx(j)
            dim = scenario.M * scenario.rx_components[j].size
            matrix = None
            if closed_form:
                matrix = _rx_closed_form(scenario, angles, j, sources)
            source: Source = "closed-form"
            if matrix is None:
                stacked = [channels[k, j] for k in sources]
                toward = channels[j, j].matrix @ V
                matrix = nullspace_beamformer(stacked, dim, side="rx", toward=toward)
                source = "nullspace"
            logger.debug("rx %d nulls %s via %s", j, sources, source)
            return Beamformer(matrix.astype(complex), j, "rx", tuple(sources), source)

        users = range(scenario.K)
        with ThreadPoolExecutor(max_workers=workers or 1) as pool:
            tx = tuple(pool.map(design_tx, users))
            rx = tuple(pool.map(design_rx, users, [b.matrix for b in tx]))

        return _finish(scenario, assignment, method, tx, rx, channels)


def _finish(
    scenario: Scenario,
    assignment: NullingAssignment,
    method: str,
    tx: tuple[Beamformer, ...],
    rx: tuple[Beamformer, ...],
    channels: Channels,
) -> ZFDesign:
    leakage = {
        (i, j): relative_leakage(
            channels[i, j].matrix,
            channels[i, i].matrix,
            rx[j].matrix,
            tx[i].matrix,
            rx[i].matrix,
        )
        for i in range(scenario.K)
        for j in range(scenario.K)
        if i != j
    }
    gains = tuple(
        direct_singular_values(channels, tx[i].matrix, rx[i].matrix, i)
        for i in range(scenario.K)
    )
    zero_users = tuple(
        i for i, g in enumerate(gains) if zero_gain(g, channels[i, i].matrix)
    )
    for i in zero_users:
        logger.warning("User %d has a zero direct gain: %s", i, np.array2string(gains[i]))
    design = ZFDesign(
        scenario=scenario,
        assignment=assignment,
        method=method,
        tx_beamformers=tx,
        rx_beamformers=rx,
        leakage=leakage,
        direct_gains=gains,
        zero_gain_users=zero_users,
    )
    if not design.nulling_certified:
        logger.warning(
            "Leakage %.3e exceeds %.0e for %s",
            design.leakage_max,
            LEAKAGE_TOL,
            scenario.identifier,
        )
    return design


def _as_complex(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix, dtype=complex)


def fixed_design(
    scenario: Scenario,
    assignment: NullingAssignment,
    tx: list[np.ndarray],
    rx: list[np.ndarray],
    *,
    method: str = "fixed",
    source: Source = "identity",
) -> ZFDesign:
    """Wrap externally chosen beamformers (identity after rotation, say) as a design."""
    if len(tx) != scenario.K or len(rx) != scenario.K:
        got = f"{len(tx)} and {len(rx)}"
        msg = f"Expected {scenario.K} precoders and combiners, got {got}"
        raise ValueError(msg)
    channels = scenario_channels(scenario)
    tx_bf = tuple(
        Beamformer(_as_complex(m), i, "tx", tuple(assignment.nulled_by_tx(i)), source)
        for i, m in enumerate(tx)
    )
    rx_bf = tuple(
        Beamformer(_as_complex(m), j, "rx", tuple(assignment.nulled_by_rx(j)), source)
        for j, m in enumerate(rx)
    )
    return _finish(scenario, assignment, method, tx_bf, rx_bf, channels)

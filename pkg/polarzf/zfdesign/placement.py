"""Interference nulling by physically rotating two-dipole nodes (K <= 3)."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses
import itertools
import math
from typing import Literal

import numpy as np

from polarzf import telemetry
from polarzf.geometry import Scenario
from polarzf.polarization.dipoles import DipoleComponent, DipoleConfig
from polarzf.zfdesign.assignment import NullingAssignment, NullingSide, assign_nulling
from polarzf.zfdesign.design import ZFDesign, fixed_design


logger = telemetry.get_logger(__name__)

GAIN_ATOL = 1e-12
SUBSET_SIZE = 3

type NodeKind = Literal["pair", "omni"]

_MAGNETIC_TWIN = {
    DipoleComponent.E_X: DipoleComponent.M_X,
    DipoleComponent.E_Y: DipoleComponent.M_Y,
}
# theta-polarized in the azimuth plane; the other three are phi-polarized
_VERTICAL = frozenset({DipoleComponent.E_Z, DipoleComponent.M_X, DipoleComponent.M_Y})


@dataclasses.dataclass(frozen=True, eq=False)
class PlacementPlan:
    scenario: Scenario
    """The placed users with every node's dipoles rotated into place."""
    assignment: NullingAssignment
    tx_axes: tuple[float, ...]
    rx_axes: tuple[float, ...]
    """Azimuth every node's in-plane dipoles are aligned with."""
    gains: tuple[float, ...]
    """Product of the in-plane dipole gains of each user's direct link."""
    diagonals: tuple[tuple[float, ...], ...]
    """Predicted diagonal of H^[ii] / (a e^{-jkr}), in component order."""
    users: tuple[int, ...] = ()
    """Indices of the placed users in the input scenario."""

    @property
    def tx_rotations(self) -> tuple[float, ...]:
        return tuple(c.azimuth_rotation for c in self.scenario.tx_components)

    @property
    def rx_rotations(self) -> tuple[float, ...]:
        return tuple(c.azimuth_rotation for c in self.scenario.rx_components)

    @property
    def weakest_gain(self) -> float:
        return min(abs(g) for diagonal in self.diagonals for g in diagonal)


def _unsupported(config: DipoleConfig, reason: str = "") -> ValueError:
    msg = (
        "Optimal placement needs one in-plane electric and one in-plane magnetic "
        "dipole, or a z dipole plus an in-plane dipole of the other polarization, "
        f"got {config.tokens!r}{reason}"
    )
    return ValueError(msg)


def node_kind(config: DipoleConfig) -> NodeKind:
    """Node kind: "pair" for an in-plane (e, m) node, "omni" with a z dipole."""
    kinds = config.components
    if len(kinds) != 2:
        raise _unsupported(config)
    planar = [c for c in kinds if c.is_in_plane]
    if len(planar) == 2:
        if planar[0].is_electric == planar[1].is_electric:
            raise _unsupported(config)
        return "pair"
    if len(planar) != 1:
        raise _unsupported(config)
    omni = next(c for c in kinds if not c.is_in_plane)
    if (omni in _VERTICAL) == (planar[0] in _VERTICAL):
        raise _unsupported(config, " (both radiate the same polarization)")
    return "omni"


def _aligned(config: DipoleConfig, axis: float) -> DipoleConfig:
    """Turn the in-plane dipoles of a node to point along `axis`.

    The magnetic dipole of a pair is turned parallel to the electric one, so
    an (e_x, m_y) node is realized as (e_x, m_x). A z dipole is unaffected.
    """
    if node_kind(config) == "omni":
        planar = next(c for c in config.components if c.is_in_plane)
        return DipoleConfig(config.components, axis - planar.axis_angle)
    e = next(c for c in config.components if c.is_electric)
    return DipoleConfig((e, _MAGNETIC_TWIN[e]), axis - e.axis_angle)


def _user_kinds(scenario: Scenario) -> list[NodeKind]:
    kinds = []
    for i, (tx, rx) in enumerate(zip(scenario.tx_components, scenario.rx_components)):
        tx_kind, rx_kind = node_kind(tx), node_kind(rx)
        if tx_kind != rx_kind or (tx_kind == "omni" and tx.components != rx.components):
            msg = f"User {i}: transmitter {tx.tokens!r} and receiver {rx.tokens!r} differ"
            raise ValueError(msg)
        kinds.append(tx_kind)
    return kinds


def _assignment(kinds: list[NodeKind], mirrored: bool) -> NullingAssignment:
    K = len(kinds)
    omni = [i for i, kind in enumerate(kinds) if kind == "omni"]
    if not omni:
        cyclic = assign_nulling(K, capacity=1)
        if not mirrored:
            return cyclic
        flipped = {
            link: NullingSide.RX if side is NullingSide.TX else NullingSide.TX
            for link, side in cyclic
        }
        return NullingAssignment(K=K, capacity=1, sides=flipped)
    if K != 2 or len(omni) != 1 or mirrored:
        msg = (
            "Optimal placement with a z dipole covers one user of a K=2 pair, "
            "since the dipole is omnidirectional in the azimuth plane and its "
            f"partner must null both cross links, got {kinds} (mirrored={mirrored})"
        )
        raise ValueError(msg)
    (u,) = omni
    other = 1 - u
    sides = {(other, u): NullingSide.TX, (u, other): NullingSide.RX}
    return NullingAssignment(K=2, capacity=1, sides=sides)


def optimal_placement_design(
    scenario: Scenario,
    *,
    mirrored: bool = False,
    users: Sequence[int] | None = None,
) -> PlacementPlan:
    """Rotate every node so each cross link is nulled by one of its ends.

    K=2: transmitters align with their cross link, receivers turn 90 degrees
    off their direct link (`mirrored` swaps the two roles). A K=2 user may
    use a z dipole with an in-plane dipole of the other polarization; its
    partner's ends then null both cross links. K=3: transmitter i aligns
    with the link to receiver i+1 and receiver j with the link from
    transmitter j+1 (`mirrored` uses i-1 and j-1).

    Args:
        scenario: Single-antenna scenario with two dipoles per node
        mirrored: Swap the nulling roles of transmitters and receivers
        users: Place only these users (at most three), e.g. from
            `select_placement_users`
    """
    picked = tuple(range(scenario.K)) if users is None else tuple(users)
    if users is not None:
        scenario = scenario.subset(picked)
    if scenario.K not in (2, 3) or scenario.M != 1:
        got = f"K={scenario.K}, M={scenario.M}"
        msg = f"Optimal placement covers K in {{2, 3}} with M=1, got {got}"
        raise ValueError(msg)
    kinds = _user_kinds(scenario)
    assignment = _assignment(kinds, mirrored)
    angles = scenario.link_angles()
    tx_axes, rx_axes = [], []
    for i in range(scenario.K):
        targets = assignment.nulled_by_tx(i)
        sources = assignment.nulled_by_rx(i)
        off_direct = angles[i, i] + math.pi / 2
        tx_axes.append(float(angles[i, targets[0]] if targets else off_direct))
        rx_axes.append(float(angles[sources[0], i] if sources else off_direct))
    rotated = scenario.with_components(
        [_aligned(c, a) for c, a in zip(scenario.tx_components, tx_axes)],
        [_aligned(c, a) for c, a in zip(scenario.rx_components, rx_axes)],
    )
    gains = tuple(
        math.sin(angles[i, i] - tx_axes[i]) * math.sin(angles[i, i] - rx_axes[i])
        for i in range(scenario.K)
    )
    diagonals = tuple(
        tuple(gains[i] if c.is_in_plane else 1.0 for c in config.components)
        for i, config in enumerate(rotated.tx_components)
    )
    for i, gain in enumerate(gains):
        if abs(gain) < GAIN_ATOL:
            logger.warning("User %d: dipoles aligned with its own direct link, gain 0", i)
    return PlacementPlan(
        scenario=rotated,
        assignment=assignment,
        tx_axes=tuple(tx_axes),
        rx_axes=tuple(rx_axes),
        gains=gains,
        diagonals=diagonals,
        users=picked,
    )


def select_placement_users(
    scenario: Scenario, size: int = SUBSET_SIZE
) -> tuple[int, ...]:
    """The `size` users whose placement keeps the largest weakest gain.

    For K > 3 only a subset of three users can be placed, which serves up to
    6 streams. Ties go to the lexicographically first subset.
    """
    size = min(size, scenario.K)
    best: tuple[int, ...] | None = None
    best_gain = -1.0
    for combo in itertools.combinations(range(scenario.K), size):
        weakest = optimal_placement_design(scenario, users=combo).weakest_gain
        if weakest > best_gain:
            best, best_gain = combo, weakest
    if best is None:
        msg = f"No subset of {size} users out of K={scenario.K}"
        raise ValueError(msg)
    logger.info("Placing users %s, weakest gain %.3e", best, best_gain)
    return best


def placement_design(plan: PlacementPlan) -> ZFDesign:
    """The rotated scenario as a design with identity beamformers."""
    eye = [np.eye(2)] * plan.scenario.K
    return fixed_design(
        plan.scenario, plan.assignment, eye, eye, method="optimal-placement"
    )

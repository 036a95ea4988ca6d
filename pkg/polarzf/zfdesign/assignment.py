"""Decide, per cross link, whether the transmitter or the receiver nulls it."""

from __future__ import annotations

from collections.abc import Iterator
import dataclasses
import enum
import functools
import math

from polarzf import telemetry
from polarzf.geometry import LinkGeometry, Scenario
from polarzf.polarization.channels import numerical_rank, single_antenna_channel
from polarzf.polarization.dipoles import DipoleConfig


logger = telemetry.get_logger(__name__)

STREAMS = 2
"""Streams per user; the keyhole ceiling of a LOS link."""

type Link = tuple[int, int]


class NullingSide(enum.Enum):
    TX = "tx"
    RX = "rx"
    UNASSIGNED = "unassigned"


@dataclasses.dataclass(frozen=True, eq=False)
class NullingAssignment:
    """Side responsible for every ordered cross link (tx, rx), tx != rx."""

    K: int
    capacity: int
    sides: dict[Link, NullingSide]

    def __post_init__(self):
        expected = {(i, j) for i in range(self.K) for j in range(self.K) if i != j}
        if set(self.sides) != expected:
            msg = "An assignment must list every ordered cross link exactly once"
            raise ValueError(msg)
        for node in range(self.K):
            if self.tx_load(node) > self.capacity or self.rx_load(node) > self.capacity:
                msg = f"Node {node} exceeds nulling capacity {self.capacity}"
                raise ValueError(msg)

    def __iter__(self) -> Iterator[tuple[Link, NullingSide]]:
        return iter(sorted(self.sides.items()))

    def nulled_by_tx(self, i: int) -> list[int]:
        """Receivers whose link from transmitter `i` the transmitter nulls."""
        return [j for (t, j), side in self if t == i and side is NullingSide.TX]

    def nulled_by_rx(self, j: int) -> list[int]:
        """Transmitters whose link into receiver `j` the receiver nulls."""
        return [t for (t, r), side in self if r == j and side is NullingSide.RX]

    def tx_load(self, i: int) -> int:
        return len(self.nulled_by_tx(i))

    def rx_load(self, j: int) -> int:
        return len(self.nulled_by_rx(j))

    @property
    def unassigned(self) -> list[Link]:
        return [link for link, side in self if side is NullingSide.UNASSIGNED]

    @property
    def assigned(self) -> list[Link]:
        return [link for link, side in self if side is not NullingSide.UNASSIGNED]

    @property
    def complete(self) -> bool:
        return not self.unassigned

    def protected_users(self) -> list[int]:
        """Users whose receiver sees no unassigned incoming link."""
        open_rx = {j for _, j in self.unassigned}
        return [j for j in range(self.K) if j not in open_rx]


def full_capacity(M: int) -> int:
    """Links a node with all six components on M antennas can null."""
    return 3 * M - 1


def assign_nulling(K: int, M: int = 1, capacity: int | None = None) -> NullingAssignment:
    """Cyclic nulling assignment, or a maximal partial one when capacity runs out.

    Transmitter i nulls its links to receivers i+1, ..., i+ceil((K-1)/2)
    (mod K) and the receivers null the rest. When that exceeds `capacity`,
    whole users are protected greedily and leftover capacity is spent on the
    remaining links.

    Args:
        K: Number of users
        M: Polarimetric antennas per node
        capacity: Links each node can null; defaults to 3M - 1
    """
    cap = full_capacity(M) if capacity is None else capacity
    tx_share = math.ceil((K - 1) / 2)
    if tx_share <= cap:
        sides = {
            (i, (i + d) % K): NullingSide.TX if d <= tx_share else NullingSide.RX
            for i in range(K)
            for d in range(1, K)
        }
        return NullingAssignment(K=K, capacity=cap, sides=sides)
    assignment = _greedy_partial(K, cap)
    logger.warning(
        "Capacity %d cannot null all %d cross links of K=%d; %d left unassigned",
        cap,
        K * (K - 1),
        K,
        len(assignment.unassigned),
    )
    return assignment


def _greedy_partial(K: int, cap: int) -> NullingAssignment:
    sides = {(i, j): NullingSide.UNASSIGNED for i in range(K) for j in range(K) if i != j}
    tx_left = [cap] * K
    rx_left = [cap] * K
    for j in range(K):
        incoming = sorted((i for i in range(K) if i != j), key=lambda i: (tx_left[i], i))
        by_rx, by_tx = incoming[: rx_left[j]], incoming[rx_left[j] :]
        if any(tx_left[i] == 0 for i in by_tx):
            continue
        for i in by_rx:
            sides[i, j] = NullingSide.RX
            rx_left[j] -= 1
        for i in by_tx:
            sides[i, j] = NullingSide.TX
            tx_left[i] -= 1
    for d in range(1, K):
        for i in range(K):
            j = (i + d) % K
            if sides[i, j] is not NullingSide.UNASSIGNED:
                continue
            if tx_left[i] > 0 and tx_left[i] >= rx_left[j]:
                sides[i, j] = NullingSide.TX
                tx_left[i] -= 1
            elif rx_left[j] > 0:
                sides[i, j] = NullingSide.RX
                rx_left[j] -= 1
    return NullingAssignment(K=K, capacity=cap, sides=sides)


@functools.cache
def link_rank(config: DipoleConfig) -> int:
    """Rank of a single-antenna self link of `config` at a generic angle."""
    link = LinkGeometry(tx=0, rx=0, phi=0.7, r=1.0, a=1.0)
    return numerical_rank(single_antenna_channel(link, config, config, 0.0).matrix)


def nulling_capacity(config: DipoleConfig, M: int = 1) -> int:
    """Links a node with `config` on M antennas can null and keep two streams.

    Equals 3M - 1 for the full six-component config.
    """
    return max(0, (config.size * M - STREAMS) // link_rank(config))


def assign_for_scenario(scenario: Scenario) -> NullingAssignment:
    """`assign_nulling` with the capacity of the scenario's weakest node."""
    configs = (*scenario.tx_components, *scenario.rx_components)
    capacity = min(nulling_capacity(c, scenario.M) for c in configs)
    return assign_nulling(scenario.K, scenario.M, capacity=capacity)


def min_antennas(K: int) -> int:
    """Fewest full polarimetric antennas per node that null every cross link."""
    M = 1
    while full_capacity(M) < math.ceil((K - 1) / 2):
        M += 1
    return M

"""Node placements in the azimuth plane and the per-link quantities derived from them."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses
import itertools
import math

import numpy as np

from polarzf import telemetry
from polarzf.exceptions import (
    DegenerateGeometryError,
    NonGenericGeometryError,
    ScenarioValidationError,
)
from polarzf.polarization.dipoles import FULL, DipoleConfig


logger = telemetry.get_logger(__name__)

DEFAULT_WAVENUMBER = 2 * math.pi / 0.15
"""Free-space wavenumber of a 2 GHz carrier (wavelength 0.15 m)."""
DEFAULT_BOX = 100.0
DEFAULT_MIN_ANGLE_SEP = 0.05
RESAMPLE_BUDGET = 1000
GENERICITY_ATOL = 1e-12
"""|sin| values below this count as exactly degenerate."""

type Point = tuple[float, float]


def _as_points(points: Sequence[Sequence[float]]) -> tuple[Point, ...]:
    return tuple((float(p[0]), float(p[1])) for p in points)


def default_offsets(m: int, wavenumber: float = DEFAULT_WAVENUMBER) -> tuple[Point, ...]:
    """Half-wavelength uniform linear array along x, first element at the origin."""
    spacing = math.pi / wavenumber
    return tuple((n * spacing, 0.0) for n in range(m))


@dataclasses.dataclass(frozen=True)
class LinkGeometry:
    """Angle, distance and attenuation of the ray from transmitter `tx` to `rx`."""

    tx: int
    rx: int
    phi: float
    """Direction of propagation, radians in [0, 2pi)."""
    r: float
    """Distance in meters."""
    a: float
    """Field attenuation, 1/r."""

    @property
    def direction(self) -> np.ndarray:
        return np.array([math.cos(self.phi), math.sin(self.phi)])


@dataclasses.dataclass(frozen=True)
class Scenario:
    """K transmit/receive pairs with M polarimetric antennas per node."""

    K: int
    M: int
    tx_positions: tuple[Point, ...]
    rx_positions: tuple[Point, ...]
    antenna_offsets: tuple[Point, ...]
    wavenumber: float
    tx_components: tuple[DipoleConfig, ...]
    rx_components: tuple[DipoleConfig, ...]
    seed: int = 0

    def __post_init__(self):
        if self.K < 1:
            raise ScenarioValidationError("must be a positive integer", field="k")
        if self.M < 1:
            raise ScenarioValidationError("must be a positive integer", field="m")
        if not (math.isfinite(self.wavenumber) and self.wavenumber > 0):
            raise ScenarioValidationError("must be finite and > 0", field="wavenumber")
        for name in ("tx_positions", "rx_positions", "tx_components", "rx_components"):
            if len(getattr(self, name)) != self.K:
                msg = f"expected {self.K} entries, got {len(getattr(self, name))}"
                raise ScenarioValidationError(msg, field=name)
        if len(self.antenna_offsets) != self.M:
            msg = f"expected {self.M} offsets, got {len(self.antenna_offsets)}"
            raise ScenarioValidationError(msg, field="antenna_offsets")
        if self.antenna_offsets[0] != (0.0, 0.0):
            msg = "first offset must be the origin"
            raise ScenarioValidationError(msg, field="antenna_offsets")
        coords = [*self.tx_positions, *self.rx_positions, *self.antenna_offsets]
        if not all(math.isfinite(c) for p in coords for c in p):
            raise ScenarioValidationError("coordinates must be finite", field="placement")
        for (i, tx), (j, rx) in itertools.product(
            enumerate(self.tx_positions), enumerate(self.rx_positions)
        ):
            if tx == rx:
                msg = f"transmitter {i} and receiver {j} are co-located at {tx}"
                raise DegenerateGeometryError(msg)

    @classmethod
    def build(
        cls,
        tx_positions: Sequence[Sequence[float]],
        rx_positions: Sequence[Sequence[float]],
        *,
        M: int = 1,
        antenna_offsets: Sequence[Sequence[float]] | None = None,
        wavenumber: float = DEFAULT_WAVENUMBER,
        tx_components: DipoleConfig | Sequence[DipoleConfig] = FULL,
        rx_components: DipoleConfig | Sequence[DipoleConfig] | None = None,
        seed: int = 0,
    ) -> Scenario:
        """Build a scenario, broadcasting a single config to every node.

        Args:
            tx_positions: Transmitter coordinates in meters
            rx_positions: Receiver coordinates in meters
            M: Polarimetric antennas per node
            antenna_offsets: Array offsets shared by all nodes (defaults to a ULA)
            wavenumber: Wavenumber in rad/m
            tx_components: Config of every transmitter, or one per transmitter
            rx_components: Same for receivers (defaults to the transmitter configs)
            seed: Seed recorded with the scenario
        """
        k = len(tx_positions)
        if rx_components is None:
            rx_components = tx_components
        if antenna_offsets is None:
            antenna_offsets = default_offsets(M, wavenumber)
        return cls(
            K=k,
            M=M,
            tx_positions=_as_points(tx_positions),
            rx_positions=_as_points(rx_positions),
            antenna_offsets=_as_points(antenna_offsets),
            wavenumber=float(wavenumber),
            tx_components=_broadcast(tx_components, k),
            rx_components=_broadcast(rx_components, k),
            seed=seed,
        )

    @property
    def identifier(self) -> str:
        sizes = sorted({c.size for c in (*self.tx_components, *self.rx_components)})
        comps = "-".join(str(s) for s in sizes)
        return f"k{self.K}m{self.M}c{comps}s{self.seed}"

    def link_angles(self) -> np.ndarray:
        """K x K array of phi_ij (row: transmitter, column: receiver)."""
        tx = np.asarray(self.tx_positions)
        rx = np.asarray(self.rx_positions)
        delta = rx[np.newaxis, :, :] - tx[:, np.newaxis, :]
        angles = np.mod(np.arctan2(delta[..., 1], delta[..., 0]), 2 * np.pi)
        # a tiny negative angle wraps to exactly 2*pi in floating point
        return np.where(angles >= 2 * np.pi, 0.0, angles)

    def scaled(self, factor: float) -> Scenario:
        """Scale node coordinates (not the array offsets) by `factor`."""
        return dataclasses.replace(
            self,
            tx_positions=_as_points(np.asarray(self.tx_positions) * factor),
            rx_positions=_as_points(np.asarray(self.rx_positions) * factor),
        )

    def rotated(self, angle: float) -> Scenario:
        """Rotate every node coordinate about the origin."""
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return dataclasses.replace(
            self,
            tx_positions=_as_points(np.asarray(self.tx_positions) @ rot.T),
            rx_positions=_as_points(np.asarray(self.rx_positions) @ rot.T),
        )

    def with_components(
        self,
        tx_components: DipoleConfig | Sequence[DipoleConfig],
        rx_components: DipoleConfig | Sequence[DipoleConfig] | None = None,
    ) -> Scenario:
        if rx_components is None:
            rx_components = tx_components
        return dataclasses.replace(
            self,
            tx_components=_broadcast(tx_components, self.K),
            rx_components=_broadcast(rx_components, self.K),
        )

    def subset(self, users: Sequence[int]) -> Scenario:
        """The scenario restricted to `users`, renumbered in the given order."""
        users = tuple(users)
        if len(set(users)) != len(users) or not users:
            msg = f"users must be distinct and non-empty, got {users}"
            raise ValueError(msg)
        if any(not 0 <= u < self.K for u in users):
            msg = f"users {users} outside 0..{self.K - 1}"
            raise IndexError(msg)
        return dataclasses.replace(
            self,
            K=len(users),
            tx_positions=tuple(self.tx_positions[u] for u in users),
            rx_positions=tuple(self.rx_positions[u] for u in users),
            tx_components=tuple(self.tx_components[u] for u in users),
            rx_components=tuple(self.rx_components[u] for u in users),
        )


def _broadcast(
    configs: DipoleConfig | Sequence[DipoleConfig], k: int
) -> tuple[DipoleConfig, ...]:
    if isinstance(configs, DipoleConfig):
        return (configs,) * k
    return tuple(configs)


def link_geometry(scenario: Scenario, i: int, j: int) -> LinkGeometry:
    """Geometry of the ray from transmitter `i` to receiver `j` (0-based indices).

    Raises:
        IndexError: If an index is outside 0..K-1
        DegenerateGeometryError: If the two nodes coincide
    """
    if not (0 <= i < scenario.K and 0 <= j < scenario.K):
        msg = f"Link ({i}, {j}) outside 0..{scenario.K - 1}"
        raise IndexError(msg)
    (tx_x, tx_y), (rx_x, rx_y) = scenario.tx_positions[i], scenario.rx_positions[j]
    dx, dy = rx_x - tx_x, rx_y - tx_y
    r = math.hypot(dx, dy)
    if r == 0:
        msg = f"transmitter {i} and receiver {j} are co-located"
        raise DegenerateGeometryError(msg)
    phi = math.atan2(dy, dx) % (2 * math.pi)
    if phi >= 2 * math.pi:
        phi = 0.0
    return LinkGeometry(tx=i, rx=j, phi=phi, r=r, a=1.0 / r)


def genericity_margin_from_angles(angles: np.ndarray) -> float:
    """Genericity margin of a K x K link-angle array (see `genericity_margin`)."""
    angles = np.asarray(angles, dtype=float)
    incident = [*angles, *angles.T]
    smallest = 1.0
    for node_angles in incident:
        for a, b in itertools.combinations(node_angles, 2):
            smallest = min(smallest, abs(math.sin(a - b)))
    if smallest < GENERICITY_ATOL:
        return 0.0
    return math.asin(smallest)


def genericity_margin(scenario: Scenario) -> float:
    """Smallest angular separation, modulo pi, between two links sharing a node.

    Returns 0.0 for degenerate placements and pi/2 when no node has two links.
    """
    return genericity_margin_from_angles(scenario.link_angles())


def random_generic_scenario(
    K: int,
    M: int = 1,
    seed: int = 0,
    min_angle_sep: float = DEFAULT_MIN_ANGLE_SEP,
    *,
    components: DipoleConfig | Sequence[DipoleConfig] = FULL,
    rx_components: DipoleConfig | Sequence[DipoleConfig] | None = None,
    box: float = DEFAULT_BOX,
    wavenumber: float = DEFAULT_WAVENUMBER,
    budget: int = RESAMPLE_BUDGET,
) -> Scenario:
    """Draw node positions uniformly in [0, box]^2 until the placement is generic.

    Args:
        K: Number of user pairs
        M: Polarimetric antennas per node
        seed: Seed of the placement generator
        min_angle_sep: Required genericity margin in radians
        components: Dipole config of every transmitter (or one per transmitter)
        rx_components: Receiver configs, defaults to `components`
        box: Side length of the placement square in meters
        wavenumber: Wavenumber in rad/m
        budget: Number of placements to try

    Raises:
        NonGenericGeometryError: If no draw reaches `min_angle_sep`
    """
    if K < 1 or M < 1 or min_angle_sep <= 0:
        msg = f"Need K >= 1, M >= 1, min_angle_sep > 0 (got {K}, {M}, {min_angle_sep})"
        raise ValueError(msg)
    rng = np.random.default_rng(seed)
    best = 0.0
    for attempt in range(budget):
        tx, rx = rng.uniform(0.0, box, size=(2, K, 2))
        try:
            scenario = Scenario.build(
                tx,
                rx,
                M=M,
                wavenumber=wavenumber,
                tx_components=components,
                rx_components=rx_components,
                seed=seed,
            )
        except DegenerateGeometryError:
            continue
        margin = genericity_margin(scenario)
        if margin >= min_angle_sep:
            logger.debug("Seed %d: generic placement after %d draws", seed, attempt + 1)
            return scenario
        best = max(best, margin)
    msg = (
        f"No placement with margin >= {min_angle_sep} in {budget} draws "
        f"(best {best:.4f}, K={K}, seed={seed})"
    )
    raise NonGenericGeometryError(msg)


def suggested_min_angle_sep(K: int) -> float:
    """Margin that random placements of K pairs reach within the resample budget."""
    if K <= 5:
        return DEFAULT_MIN_ANGLE_SEP
    return 0.5 / K**3

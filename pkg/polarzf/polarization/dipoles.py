"""Dipole components and per-node dipole configurations."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses
import enum
import math


class DipoleComponent(enum.Enum):
    """One of the six co-located dipoles of a polarimetric antenna.

    The member order is the global component order used by every matrix.
    """

    E_X = "ex"
    E_Y = "ey"
    E_Z = "ez"
    M_X = "mx"
    M_Y = "my"
    M_Z = "mz"

    @property
    def token(self) -> str:
        return self.value

    @property
    def is_electric(self) -> bool:
        return self.value.startswith("e")

    @property
    def is_in_plane(self) -> bool:
        """Whether the dipole axis lies in the azimuth plane."""
        return not self.value.endswith("z")

    @property
    def axis_angle(self) -> float:
        """Azimuth of the dipole axis for in-plane kinds (x: 0, y: pi/2)."""
        if not self.is_in_plane:
            msg = f"{self.token} has no in-plane axis"
            raise ValueError(msg)
        return 0.0 if self.value.endswith("x") else math.pi / 2

    @classmethod
    def from_token(cls, token: str) -> DipoleComponent:
        try:
            return cls(token.strip().lower())
        except ValueError as e:
            valid = ", ".join(c.token for c in cls)
            msg = f"Unknown dipole token {token!r} (expected one of {valid})"
            raise ValueError(msg) from e


COMPONENT_ORDER: tuple[DipoleComponent, ...] = tuple(DipoleComponent)


def parse_tokens(tokens: str | Sequence[str]) -> tuple[DipoleComponent, ...]:
    """Parse `"ex ey"`, `"ex,ey"` or `["ex", "ey"]` into components."""
    if isinstance(tokens, str):
        tokens = tokens.replace(",", " ").split()
    return tuple(DipoleComponent.from_token(t) for t in tokens)


@dataclasses.dataclass(frozen=True)
class DipoleConfig:
    """The active dipoles of one node and the physical rotation of its x/y axes."""

    components: tuple[DipoleComponent, ...]
    """Active components, in the order their matrix rows/columns appear."""
    azimuth_rotation: float = 0.0
    """Rotation of the in-plane dipoles about z, in radians."""

    def __post_init__(self):
        if not 1 <= len(self.components) <= len(COMPONENT_ORDER):
            msg = f"A node needs 1 to 6 dipole components, got {len(self.components)}"
            raise ValueError(msg)
        if len(set(self.components)) != len(self.components):
            msg = f"Duplicate dipole components: {self.tokens}"
            raise ValueError(msg)
        if not math.isfinite(self.azimuth_rotation):
            msg = "azimuth_rotation must be finite"
            raise ValueError(msg)

    @classmethod
    def from_tokens(
        cls, tokens: str | Sequence[str], rotation: float = 0.0
    ) -> DipoleConfig:
        return cls(parse_tokens(tokens), rotation)

    @property
    def size(self) -> int:
        return len(self.components)

    @property
    def tokens(self) -> str:
        return " ".join(c.token for c in self.components)

    def rotated(self, delta: float) -> DipoleConfig:
        return dataclasses.replace(self, azimuth_rotation=self.azimuth_rotation + delta)

    def with_rotation(self, rotation: float) -> DipoleConfig:
        return dataclasses.replace(self, azimuth_rotation=rotation)

    def is_layout(self, components: Sequence[DipoleComponent]) -> bool:
        """Whether this config uses exactly `components`, in that order, unrotated."""
        return self.components == tuple(components) and self.azimuth_rotation == 0.0


FULL = DipoleConfig(COMPONENT_ORDER)
IN_PLANE_FOUR = DipoleConfig.from_tokens("ex ey mx my")
ELECTRIC_IN_PLANE = DipoleConfig.from_tokens("ex ey")

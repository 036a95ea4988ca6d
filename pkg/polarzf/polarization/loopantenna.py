"""Loop-antenna realization of magnetic dipoles."""

from __future__ import annotations

import dataclasses
import math


SPEED_OF_LIGHT = 299_792_458.0
MU_0 = 4 * math.pi * 1e-7


@dataclasses.dataclass(frozen=True)
class LoopCurrent:
    current: complex
    """Loop current in amperes."""

    @property
    def magnitude(self) -> float:
        return abs(self.current)

    @property
    def phase_deg(self) -> float:
        return math.degrees(math.atan2(self.current.imag, self.current.real))


def loop_current_equivalent(
    magnetic_current: float, radius: float, freq: float
) -> LoopCurrent:
    """Loop current radiating like a magnetic dipole of current `magnetic_current`.

    Solves I_m lambda / 2 = j pi a (2 pi f)^2 mu_0 I_l for I_l.

    Args:
        magnetic_current: Magnetic current I_m in volts
        radius: Loop radius in meters
        freq: Operating frequency in Hz
    """
    if radius <= 0 or freq <= 0:
        msg = f"radius and freq must be positive (got {radius}, {freq})"
        raise ValueError(msg)
    wavelength = SPEED_OF_LIGHT / freq
    denominator = 1j * math.pi * radius * (2 * math.pi * freq) ** 2 * MU_0
    return LoopCurrent(magnetic_current * wavelength / 2 / denominator)

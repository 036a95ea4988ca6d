"""Far-field radiation patterns of the six unit-excited dipoles."""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from polarzf.polarization.dipoles import COMPONENT_ORDER, DipoleComponent, DipoleConfig


@dataclasses.dataclass(frozen=True)
class PatternRows:
    """Vertical and horizontal response of each configured component at one azimuth."""

    a_theta: np.ndarray
    """theta-polarized (vertical) field per component."""
    a_phi: np.ndarray
    """phi-polarized (horizontal) field per component."""


def pattern_3d(
    component: DipoleComponent, theta: float, phi: float
) -> tuple[float, float]:
    """(theta, phi) field components of a unit dipole seen from direction (theta, phi)."""
    # exact values in the azimuth plane
    ct, st = (0.0, 1.0) if theta == math.pi / 2 else (math.cos(theta), math.sin(theta))
    cp, sp = math.cos(phi), math.sin(phi)
    match component:
        case DipoleComponent.E_X:
            return -ct * cp, sp
        case DipoleComponent.E_Y:
            return -ct * sp, -cp
        case DipoleComponent.E_Z:
            return st, 0.0
        case DipoleComponent.M_X:
            return sp, ct * cp
        case DipoleComponent.M_Y:
            return -cp, ct * sp
        case DipoleComponent.M_Z:
            return 0.0, -st


def azimuth_rows(config: DipoleConfig, phi: float) -> PatternRows:
    """Pattern rows of `config` in the azimuth plane at angle `phi`.

    In-plane dipoles are evaluated at `phi - azimuth_rotation`; z dipoles do
    not depend on the rotation.
    """
    vertical = np.empty(config.size)
    horizontal = np.empty(config.size)
    for n, component in enumerate(config.components):
        angle = phi - config.azimuth_rotation if component.is_in_plane else phi
        vertical[n], horizontal[n] = pattern_3d(component, math.pi / 2, angle)
    return PatternRows(a_theta=vertical, a_phi=horizontal)


def dipole_axis_pattern(electric: bool, axis: float, phi: float) -> tuple[float, float]:
    """(vertical, horizontal) field of an in-plane dipole whose axis points at `axis`.

    The radiated field is the projection of the axis onto the plane normal to
    the ray, hence the sin(phi - axis) magnitude.
    """
    projection = math.sin(phi - axis)
    return (0.0, projection) if electric else (projection, 0.0)


def rotation_mixing_matrix(delta: float) -> np.ndarray:
    """6 x 6 matrix mapping rotated in-plane dipoles onto the unrotated basis.

    Column n holds the unrotated-component weights of component n rotated by
    `delta`; the z dipoles map to themselves.
    """
    c, s = math.cos(delta), math.sin(delta)
    block = np.array([[c, -s], [s, c]])
    mixing = np.eye(len(COMPONENT_ORDER))
    for x_kind in (DipoleComponent.E_X, DipoleComponent.M_X):
        n = COMPONENT_ORDER.index(x_kind)
        mixing[n : n + 2, n : n + 2] = block
    return mixing

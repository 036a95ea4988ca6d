"""Post-beamforming direct-link channels and their closed-form cross-checks."""

from __future__ import annotations

import dataclasses
from typing import Literal

import numpy as np

from polarzf import telemetry
from polarzf.geometry import Scenario, link_geometry
from polarzf.polarization.channels import scenario_channel
from polarzf.polarization.dipoles import COMPONENT_ORDER, IN_PLANE_FOUR
from polarzf.zfdesign import closedform
from polarzf.zfdesign.design import ZFDesign


logger = telemetry.get_logger(__name__)

CLOSED_FORM_RTOL = 1e-8


@dataclasses.dataclass(frozen=True)
class ClosedFormGain:
    kind: Literal["lambda", "gamma"]
    scalar: float
    """lambda^[ii], or gamma^[ii] of the unscaled dual-null forms."""
    expected: complex
    """Predicted diagonal entry of Lambda for the design's unit-norm beamformers."""
    mismatch: float
    """Relative gap between the singular values of Lambda and |expected|."""


@dataclasses.dataclass(frozen=True)
class EffectiveChannel:
    user: int
    Lambda: np.ndarray
    """2 x 2 matrix U_i* H^[ii] V_i."""
    closed_form: ClosedFormGain | None = None

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.Lambda, compute_uv=False)


def _closed_form_gain(
    design: ZFDesign, scenario: Scenario, i: int
) -> tuple[Literal["lambda", "gamma"], float, float] | None:
    """(kind, scalar, scale) with Lambda_ii = a e^{-jkr} scalar * scale, or None."""
    if scenario.M != 1:
        return None
    tx_cfg, rx_cfg = scenario.tx_components[i], scenario.rx_components[i]
    targets = design.assignment.nulled_by_tx(i)
    sources = design.assignment.nulled_by_rx(i)
    angles = scenario.link_angles()
    phi_ii = angles[i, i]
    four = IN_PLANE_FOUR.components
    single = len(targets) == len(sources) == 1
    if tx_cfg.is_layout(four) and rx_cfg.is_layout(four) and single:
        tx_angle, rx_angle = angles[i, targets[0]], angles[sources[0], i]
        scalar = closedform.lambda_gain(phi_ii, tx_angle, rx_angle)
        return "lambda", scalar, 1.0
    if (
        tx_cfg.is_layout(COMPONENT_ORDER)
        and rx_cfg.is_layout(COMPONENT_ORDER)
        and len(targets) == len(sources) == 2
    ):
        tx_a, tx_b = angles[i, targets[0]], angles[i, targets[1]]
        rx_a, rx_b = angles[sources[0], i], angles[sources[1], i]
        scalar = closedform.gamma_gain(phi_ii, tx_a, tx_b, rx_a, rx_b)
        norms = closedform.dual_column_norm(tx_a, tx_b)
        norms *= closedform.dual_column_norm(rx_a, rx_b)
        scale = 1.0 / norms
        return "gamma", scalar, scale
    return None


def effective_channels(
    design: ZFDesign, scenario: Scenario | None = None
) -> list[EffectiveChannel]:
    """Lambda_i = U_i* H^[ii] V_i for every user, cross-checked against closed forms.

    The singular values of Lambda do not depend on the basis chosen inside a
    null space, so the check applies to closed-form and null-space designs alike.
    """
    scenario = scenario or design.scenario
    result = []
    for i in range(scenario.K):
        H = scenario_channel(scenario, i, i).matrix
        Lambda = design.U(i).conj().T @ H @ design.V(i)
        check = None
        if (found := _closed_form_gain(design, scenario, i)) is not None:
            kind, scalar, scale = found
            link = link_geometry(scenario, i, i)
            phase = np.exp(-1j * scenario.wavenumber * link.r)
            expected = link.a * phase * scalar * scale
            s = np.linalg.svd(Lambda, compute_uv=False)
            reference = max(abs(expected), float(s[0]), np.finfo(float).tiny)
            mismatch = float(np.max(np.abs(s - abs(expected))) / reference)
            if mismatch > CLOSED_FORM_RTOL:
                logger.warning(
                    "User %d: |Lambda| deviates from %s by %.2e", i, kind, mismatch
                )
            check = ClosedFormGain(kind, scalar, complex(expected), mismatch)
        result.append(EffectiveChannel(user=i, Lambda=Lambda, closed_form=check))
    return result


def printed_dual_lambda(
    scenario: Scenario,
    targets: list[int],
    sources: list[int],
    i: int,
) -> tuple[np.ndarray, complex]:
    """Lambda_i of the dual-null forms at their printed scale, and its predicted diagonal.

    Args:
        scenario: A single-antenna scenario with all six components at user i
        targets: The two receivers transmitter i nulls
        sources: The two transmitters receiver i nulls
        i: The user
    """
    angles = scenario.link_angles()
    tx_a, tx_b = angles[i, targets[0]], angles[i, targets[1]]
    rx_a, rx_b = angles[sources[0], i], angles[sources[1], i]
    V = closedform.closed_form_tx_dual(tx_a, tx_b, normalization="printed")
    U = closedform.closed_form_rx_dual(rx_a, rx_b, normalization="printed")
    Lambda = U.conj().T @ scenario_channel(scenario, i, i).matrix @ V
    link = link_geometry(scenario, i, i)
    scale = closedform.printed_dual_normalization(tx_a, tx_b)
    scale *= closedform.printed_dual_normalization(rx_a, rx_b)
    gamma = closedform.gamma_gain(angles[i, i], tx_a, tx_b, rx_a, rx_b)
    expected = link.a * np.exp(-1j * scenario.wavenumber * link.r) * gamma * scale
    return Lambda, complex(expected)

"""Sum rates over SNR and the multiplexing gain read off their high-SNR slope."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses
import math

import numpy as np

from polarzf import telemetry
from polarzf.geometry import Scenario
from polarzf.polarization.channels import RANK_RTOL, scenario_channel, scenario_channels
from polarzf.zfdesign.assignment import STREAMS
from polarzf.zfdesign.design import LEAKAGE_TOL, ZFDesign
from polarzf.zfdesign.effective import EffectiveChannel, effective_channels


logger = telemetry.get_logger(__name__)

SNR_LO = 1e8
SNR_HI = 1e10
MAX_SNR_LO = 1e12
PAIR_RATIO = 100.0
SLOPE_HEADROOM = 100.0
"""Minimum per-stream SNR at the lower slope point."""


@dataclasses.dataclass(frozen=True)
class RateCurve:
    """Sum rate (bits per channel use) at increasing linear SNRs."""

    points: tuple[tuple[float, float], ...]
    scenario_id: str = ""
    design_id: str = ""

    def __post_init__(self):
        snrs = [s for s, _ in self.points]
        if any(b <= a for a, b in zip(snrs, snrs[1:])):
            msg = "SNR values must be strictly increasing"
            raise ValueError(msg)

    @property
    def snrs(self) -> list[float]:
        return [s for s, _ in self.points]

    @property
    def rates(self) -> list[float]:
        return [r for _, r in self.points]

    def rate_at(self, snr: float) -> float | None:
        for s, r in self.points:
            if math.isclose(s, snr, rel_tol=1e-12):
                return r
        return None


@dataclasses.dataclass(frozen=True)
class MuxgEstimate:
    gamma_hat: float
    snr_lo: float
    snr_hi: float
    residual_interference: bool = False


def _lambda(item: EffectiveChannel | np.ndarray) -> np.ndarray:
    return item.Lambda if isinstance(item, EffectiveChannel) else np.asarray(item)


def _log2det(matrix: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(matrix)
    if sign.real <= 0:
        msg = "Covariance is not positive definite"
        raise np.linalg.LinAlgError(msg)
    return float(logdet / math.log(2))


def sum_rate(
    effective: Sequence[EffectiveChannel | np.ndarray],
    residual: Sequence[np.ndarray] | None,
    snr: float,
) -> float:
    """Sum over users of log2 det(I + (P/2) Lambda Lambda* (I + Q)^-1).

    P = snr / K is each user's power, split equally over its two streams.
    `residual` holds each user's interference covariance after combining for
    unit stream power; it is scaled by P/2 like the signal.
    """
    if snr <= 0:
        msg = f"SNR must be positive, got {snr}"
        raise ValueError(msg)
    k = len(effective)
    stream_power = snr / k / STREAMS
    total = 0.0
    for i, item in enumerate(effective):
        lam = _lambda(item)
        eye = np.eye(lam.shape[0])
        signal = stream_power * lam @ lam.conj().T
        noise = eye if residual is None else eye + stream_power * residual[i]
        total += _log2det(noise + signal) - _log2det(noise)
    return max(total, 0.0)


def residual_covariances(
    design: ZFDesign, scenario: Scenario | None = None
) -> list[np.ndarray]:
    """Interference covariance sum_k U_j* H^[kj] V_k V_k* H^[kj]* U_j per receiver j."""
    scenario = scenario or design.scenario
    channels = scenario_channels(scenario)
    result = []
    for j in range(scenario.K):
        U = design.U(j)
        Q = np.zeros((U.shape[1], U.shape[1]), dtype=complex)
        for k in range(scenario.K):
            if k == j:
                continue
            leak = U.conj().T @ channels[k, j].matrix @ design.V(k)
            Q += leak @ leak.conj().T
        result.append(Q)
    return result


def has_residual_interference(design: ZFDesign) -> bool:
    return max(design.leakage.values(), default=0.0) > LEAKAGE_TOL


def rate_curve(
    design: ZFDesign,
    snrs: Sequence[float],
    scenario: Scenario | None = None,
) -> RateCurve:
    scenario = scenario or design.scenario
    effective = effective_channels(design, scenario)
    residual = residual_covariances(design, scenario)
    points = tuple((float(s), sum_rate(effective, residual, s)) for s in sorted(snrs))
    return RateCurve(points, scenario_id=scenario.identifier, design_id=design.method)


def muxg_slope(
    curve: RateCurve,
    snr_lo: float = SNR_LO,
    snr_hi: float = SNR_HI,
    *,
    residual_interference: bool = False,
) -> MuxgEstimate:
    """Slope of the sum rate over log2(SNR) between two SNRs of the curve.

    Raises:
        ValueError: If an SNR is missing from the curve or snr_hi <= snr_lo
    """
    if snr_hi <= snr_lo:
        msg = f"Need snr_hi > snr_lo (got {snr_lo}, {snr_hi})"
        raise ValueError(msg)
    r_lo, r_hi = curve.rate_at(snr_lo), curve.rate_at(snr_hi)
    if r_lo is None or r_hi is None:
        msg = f"SNRs {snr_lo:g} and {snr_hi:g} must both be on the curve"
        raise ValueError(msg)
    slope = (r_hi - r_lo) / (math.log2(snr_hi) - math.log2(snr_lo))
    return MuxgEstimate(max(slope, 0.0), snr_lo, snr_hi, residual_interference)


def asymptotic_snr_pair(
    design: ZFDesign, scenario: Scenario | None = None
) -> tuple[float, float]:
    """SNR pair at which every non-zero stream is deep in its high-SNR regime.

    Starts at the default 1e8 / 1e10 and moves up in decades until the weakest
    non-zero stream sees an SNR of at least 100 at the lower point.
    """
    scenario = scenario or design.scenario
    weakest = math.inf
    for i, gains in enumerate(design.direct_gains):
        reference = np.linalg.norm(scenario_channel(scenario, i, i).matrix, 2)
        alive = gains[gains > RANK_RTOL * reference]
        if alive.size:
            weakest = min(weakest, float(alive.min()))
    lo = SNR_LO
    if math.isfinite(weakest):
        needed = SLOPE_HEADROOM * scenario.K * STREAMS / weakest**2
        lo = max(lo, 10.0 ** math.ceil(math.log10(needed)))
    if lo > MAX_SNR_LO:
        logger.warning(
            "Weakest stream gain %.2e needs SNR %.1e; capped at %.0e",
            weakest,
            lo,
            MAX_SNR_LO,
        )
        lo = MAX_SNR_LO
    return lo, lo * PAIR_RATIO


def estimate_muxg(
    design: ZFDesign,
    scenario: Scenario | None = None,
    snr_pair: tuple[float, float] | None = None,
) -> MuxgEstimate:
    """Gamma-hat of a design at `snr_pair` (default: `asymptotic_snr_pair`)."""
    scenario = scenario or design.scenario
    lo, hi = snr_pair or asymptotic_snr_pair(design, scenario)
    curve = rate_curve(design, [lo, hi], scenario)
    residual = has_residual_interference(design)
    estimate = muxg_slope(curve, lo, hi, residual_interference=residual)
    logger.debug(
        "%s: gamma-hat %.4f at %.0e/%.0e", scenario.identifier, estimate.gamma_hat, lo, hi
    )
    return estimate

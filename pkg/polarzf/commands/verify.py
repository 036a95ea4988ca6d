"""The `verify` command: re-check the certificates stored in a design file."""

from __future__ import annotations

import dataclasses
import os

from polarzf import telemetry
from polarzf.backends.designbackend import load_design
from polarzf.exceptions import CertificateViolationError
from polarzf.zfdesign.design import LEAKAGE_TOL


logger = telemetry.get_logger(__name__)

ORTHONORMALITY_TOL = 1e-10


@dataclasses.dataclass(frozen=True)
class VerifyReport:
    scenario_id: str
    leakage_max: float
    worst_link: tuple[int, int] | None
    orthonormality_error: float
    complete: bool

    @property
    def passed(self) -> bool:
        leak_ok = self.leakage_max <= LEAKAGE_TOL
        orthonormal = self.orthonormality_error <= ORTHONORMALITY_TOL
        return self.complete and leak_ok and orthonormal

    def summary(self) -> str:
        status = "ok" if self.passed else "violated"
        return (
            f"{status}: {self.scenario_id} leakage_max={self.leakage_max:.3e} "
            f"orthonormality={self.orthonormality_error:.3e} complete={self.complete}"
        )


def verify(design_path: str | os.PathLike[str]) -> VerifyReport:
    """Recompute leakage and orthonormality from the stored matrices.

    Raises:
        CertificateViolationError: If a cross link is unassigned, an assigned
            link leaks above 1e-10 or a beamformer's columns are not orthonormal
    """
    loaded = load_design(design_path)
    design = loaded.design
    assigned = design.assignment.assigned
    worst = max(assigned, key=lambda link: design.leakage[link], default=None)
    beamformers = (*design.tx_beamformers, *design.rx_beamformers)
    report = VerifyReport(
        scenario_id=design.scenario.identifier,
        leakage_max=design.leakage_max,
        worst_link=worst,
        orthonormality_error=max(b.orthonormality_error() for b in beamformers),
        complete=design.assignment.complete,
    )
    if loaded.recorded_certified and not design.certified:
        logger.warning("Design file claims a certificate that does not hold")
    if not report.passed:
        msg = f"{report.summary()} worst link {worst}"
        raise CertificateViolationError(msg)
    return report

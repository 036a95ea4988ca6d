"""CSV output for result records, rate curves and dipole sweeps."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
import csv
import dataclasses
import io
from typing import TYPE_CHECKING, Any

from polarzf.backends import resultbackend
from polarzf.geometry import genericity_margin


if TYPE_CHECKING:
    from polarzf.evaluation.rates import MuxgEstimate, RateCurve
    from polarzf.evaluation.sweep import SweepTable
    from polarzf.zfdesign.design import ZFDesign


@dataclasses.dataclass(frozen=True)
class ResultRecord:
    """One row per (scenario, design)."""

    scenario_id: str
    K: int
    M: int
    components: int
    scheme: str
    leakage_max: float
    dof: int
    gamma_hat: float
    genericity_margin: float
    seed: int

    @classmethod
    def from_design(
        cls,
        design: ZFDesign,
        scheme: str,
        dof: int,
        muxg: MuxgEstimate,
    ) -> ResultRecord:
        scenario = design.scenario
        configs = (*scenario.tx_components, *scenario.rx_components)
        return cls(
            scenario_id=scenario.identifier,
            K=scenario.K,
            M=scenario.M,
            components=max(c.size for c in configs),
            scheme=scheme,
            leakage_max=design.leakage_max,
            dof=dof,
            gamma_hat=muxg.gamma_hat,
            genericity_margin=genericity_margin(scenario),
            seed=scenario.seed,
        )


RECORD_FIELDS = tuple(f.name for f in dataclasses.fields(ResultRecord))
CURVE_FIELDS = ("scenario_id", "design", "snr", "sum_rate")
SWEEP_FIELDS = ("size", "components", "dof", "min_dof", "max_dof", "trials")


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Comma-separated text with a single header line and "\\n" line ends."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


class CsvBackend(resultbackend.ResultBackend):
    def write_records(self, records: Iterable[ResultRecord]):
        rows = (dataclasses.astuple(r) for r in records)
        self.emit(to_csv(RECORD_FIELDS, rows))

    def write_curves(self, curves: Iterable[RateCurve]):
        rows = (
            (curve.scenario_id, curve.design_id, snr, rate)
            for curve in curves
            for snr, rate in curve.points
        )
        self.emit(to_csv(CURVE_FIELDS, rows))

    def write_sweep(self, table: SweepTable):
        rows = (
            (
                row.size,
                row.components,
                row.mean_dof,
                row.min_dof,
                row.max_dof,
                len(row.dofs),
            )
            for row in table.rows
        )
        self.emit(to_csv(SWEEP_FIELDS, rows))

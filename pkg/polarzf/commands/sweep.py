"""The `sweep` and `fig5` commands: rate curves and the dipole-count sweep."""

from __future__ import annotations

import math
import os

import logfire

from polarzf import telemetry
from polarzf.backends.csvbackend import CsvBackend
from polarzf.commands.design import design_for, load
from polarzf.evaluation.rates import RateCurve, has_residual_interference, rate_curve
from polarzf.evaluation.sweep import SweepTable, dipole_sweep


logger = telemetry.get_logger(__name__)


def decade_grid(snr_lo: float, snr_hi: float) -> list[float]:
    """Powers of ten from `snr_lo` to `snr_hi`, both ends included."""
    if not 0 < snr_lo < snr_hi:
        msg = f"Need 0 < snr_lo < snr_hi (got {snr_lo}, {snr_hi})"
        raise ValueError(msg)
    lo, hi = math.log10(snr_lo), math.log10(snr_hi)
    exponents = range(math.ceil(lo), math.floor(hi) + 1)
    return sorted({snr_lo, *(10.0**e for e in exponents), snr_hi})


def sweep(
    scenario_path: str | os.PathLike[str],
    out: str | os.PathLike[str] | None = None,
    seed: int | None = None,
    snr_lo: float | None = None,
    snr_hi: float | None = None,
) -> RateCurve:
    """Sum-rate curve over the file's SNR grid, or over decades of [snr_lo, snr_hi].

    Designs that cannot null every link are evaluated as far as they go.
    """
    scenario_file, scenario = load(scenario_path, seed)
    grid = scenario_file.snr_grid
    if snr_lo is not None or snr_hi is not None:
        grid = decade_grid(snr_lo or grid[0], snr_hi or grid[-1])
    with logfire.span("rate sweep", scenario=scenario.identifier, points=len(grid)):
        result = design_for(scenario_file, scenario, allow_partial=True)
        if has_residual_interference(result):
            logger.warning(
                "%s keeps residual interference; rates saturate", scenario.identifier
            )
        curve = rate_curve(result, grid)
    CsvBackend(out).write_curves([curve])
    return curve


def fig5(
    trials: int = 20,
    out: str | os.PathLike[str] | None = None,
    seed: int = 0,
    k: int = 5,
) -> SweepTable:
    """DOF against dipole count for K users, averaged over `trials` placements."""
    table = dipole_sweep(K=k, trials=trials, seed=seed)
    CsvBackend(out).write_sweep(table)
    return table

"""Monte Carlo sweep of the DOF reached with growing dipole sets."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
import dataclasses
import functools

import logfire

from polarzf import telemetry
from polarzf.evaluation.dof import dof_count
from polarzf.geometry import random_generic_scenario, suggested_min_angle_sep
from polarzf.polarization.dipoles import DipoleConfig
from polarzf.zfdesign.assignment import assign_for_scenario
from polarzf.zfdesign.design import design_zf


logger = telemetry.get_logger(__name__)

NESTED_SUBSETS: tuple[str, ...] = (
    "ex ey",
    "ex ey mx",
    "ex ey mx my",
    "ex ey ez mx my",
    "ex ey ez mx my mz",
)


@dataclasses.dataclass(frozen=True)
class SweepRow:
    components: str
    """Space-separated dipole tokens."""
    dofs: tuple[int, ...]
    """DOF of every trial, in trial order."""

    @property
    def size(self) -> int:
        return len(self.components.split())

    @property
    def mean_dof(self) -> float:
        return sum(self.dofs) / len(self.dofs)

    @property
    def min_dof(self) -> int:
        return min(self.dofs)

    @property
    def max_dof(self) -> int:
        return max(self.dofs)


@dataclasses.dataclass(frozen=True)
class SweepTable:
    K: int
    trials: int
    seed: int
    rows: tuple[SweepRow, ...]

    @property
    def is_monotone(self) -> bool:
        means = [row.mean_dof for row in self.rows]
        return all(b >= a for a, b in zip(means, means[1:]))

    def __getitem__(self, size: int) -> SweepRow:
        for row in self.rows:
            if row.size == size:
                return row
        raise KeyError(size)


def trial_dof(K: int, config: DipoleConfig, seed: int, min_angle_sep: float) -> int:
    """DOF of a best-effort design on one random generic placement."""
    scenario = random_generic_scenario(
        K, seed=seed, min_angle_sep=min_angle_sep, components=config
    )
    assignment = assign_for_scenario(scenario)
    design = design_zf(scenario, assignment, allow_partial=True)
    return dof_count(design)


def dipole_sweep(
    K: int = 5,
    subsets: Sequence[str | Sequence[str]] = NESTED_SUBSETS,
    trials: int = 20,
    *,
    seed: int = 0,
    min_angle_sep: float | None = None,
    workers: int | None = None,
) -> SweepTable:
    """Mean certified DOF for every dipole subset over `trials` random placements.

    Trial t of every subset uses placement seed `seed + t`, so all subsets
    are compared on the same node positions.
    """
    if trials < 1:
        msg = f"Need at least one trial, got {trials}"
        raise ValueError(msg)
    sep = min_angle_sep or suggested_min_angle_sep(K)
    rows = []
    with logfire.span("dipole sweep", users=K, trials=trials, subsets=len(subsets)):
        for subset in subsets:
            config = DipoleConfig.from_tokens(subset)
            seeds = [seed + t for t in range(trials)]
            with ThreadPoolExecutor(max_workers=workers or 1) as pool:
                run = functools.partial(trial_dof, K, config, min_angle_sep=sep)
                dofs = tuple(pool.map(run, seeds))
            row = SweepRow(config.tokens, dofs)
            logger.info("%s: mean DOF %.2f", row.components, row.mean_dof)
            rows.append(row)
    table = SweepTable(K=K, trials=trials, seed=seed, rows=tuple(rows))
    if not table.is_monotone:
        means = [r.mean_dof for r in rows]
        logger.warning("DOF is not monotone in the dipole count: %s", means)
    return table

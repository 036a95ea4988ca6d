"""The `design` command: scenario file in, design file out."""

from __future__ import annotations

import os

import logfire

from polarzf import telemetry
from polarzf.backends.designbackend import DesignBackend
from polarzf.exceptions import CertificateViolationError
from polarzf.geometry import Scenario
from polarzf.scenarioconfig.scenariofile import ScenarioFile, load_scenario_file
from polarzf.zfdesign.assignment import assign_for_scenario
from polarzf.zfdesign.design import LEAKAGE_TOL, Method, ZFDesign, design_zf
from polarzf.zfdesign.placement import (
    optimal_placement_design,
    placement_design,
    select_placement_users,
)


logger = telemetry.get_logger(__name__)


def load(scenario_path: str | os.PathLike[str], seed: int | None = None):
    """Scenario file and the scenario it describes, with an optional seed override."""
    scenario_file = load_scenario_file(scenario_path).with_seed(seed)
    return scenario_file, scenario_file.to_scenario()


def design_for(
    scenario_file: ScenarioFile,
    scenario: Scenario,
    *,
    method: Method = "nullspace",
    allow_partial: bool = False,
) -> ZFDesign:
    """Design for the file's scheme: rotated dipoles or zero-forcing beamformers.

    Optimal placement of more than three users places the best three of them.
    """
    if scenario_file.scheme == "optimal-placement":
        users = select_placement_users(scenario) if scenario.K > 3 else None
        return placement_design(optimal_placement_design(scenario, users=users))
    assignment = assign_for_scenario(scenario)
    return design_zf(scenario, assignment, method=method, allow_partial=allow_partial)


def design(
    scenario_path: str | os.PathLike[str],
    out: str | os.PathLike[str] | None = None,
    seed: int | None = None,
    method: Method = "nullspace",
) -> ZFDesign:
    """Design beamformers for a scenario file and write the design file.

    Raises:
        InfeasibleAssignmentError: If the cross links cannot all be assigned
        CertificateViolationError: If an assigned link leaks above tolerance
            (the design file is written regardless)
    """
    scenario_file, scenario = load(scenario_path, seed)
    with logfire.span(
        "design command", scenario=scenario.identifier, scheme=scenario_file.scheme
    ):
        result = design_for(scenario_file, scenario, method=method)
    DesignBackend(out).write_design(result, scheme=scenario_file.scheme)
    logger.info(
        "%s: leakage_max %.3e, certified %s",
        scenario.identifier,
        result.leakage_max,
        result.certified,
    )
    if not result.nulling_certified:
        leak = f"{result.leakage_max:.3e}"
        msg = f"leakage {leak} exceeds {LEAKAGE_TOL:.0e} for {scenario.identifier}"
        raise CertificateViolationError(msg)
    return result

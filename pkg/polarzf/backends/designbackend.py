"""YAML design files: scenario, nulling assignment, beamformers and leakage."""

from __future__ import annotations

import dataclasses
import os
from typing import Any

import numpy as np
from pydantic import ValidationError
import upath
import yamling

from polarzf import telemetry
from polarzf.backends import resultbackend
from polarzf.backends.matrixcodec import decode_matrix, encode_matrix
from polarzf.exceptions import ScenarioParseError
from polarzf.scenarioconfig.scenariofile import ScenarioFile, validation_error
from polarzf.zfdesign.assignment import NullingAssignment, NullingSide
from polarzf.zfdesign.design import ZFDesign, fixed_design
from polarzf.zfdesign.nullspace import Beamformer


logger = telemetry.get_logger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class LoadedDesign:
    design: ZFDesign
    """Design rebuilt from the stored matrices, leakage recomputed."""
    scenario_file: ScenarioFile
    recorded_leakage_max: float | None = None
    recorded_certified: bool | None = None


def _beamformer_entry(bf: Beamformer) -> dict[str, Any]:
    return {
        "node": bf.node,
        "nulls": list(bf.nulls),
        "source": bf.source,
        "matrix": encode_matrix(bf.matrix),
    }


def design_document(design: ZFDesign, scheme: str = "fixed-zf") -> dict[str, Any]:
    scenario_file = ScenarioFile.from_scenario(
        design.scenario,
        scheme=scheme,  # type: ignore[arg-type]
    )
    return {
        "scenario": scenario_file.model_dump(mode="json", exclude_none=True),
        "method": design.method,
        "assignment": {
            "capacity": design.assignment.capacity,
            "links": [
                {"tx": i, "rx": j, "side": side.value}
                for (i, j), side in design.assignment
            ],
        },
        "tx": [_beamformer_entry(b) for b in design.tx_beamformers],
        "rx": [_beamformer_entry(b) for b in design.rx_beamformers],
        "leakage": [
            {"tx": i, "rx": j, "value": value}
            for (i, j), value in sorted(design.leakage.items())
        ],
        "leakage_max": design.leakage_max,
        "certified": design.certified,
    }


class DesignBackend(resultbackend.ResultBackend):
    def write_design(self, design: ZFDesign, scheme: str = "fixed-zf"):
        self.emit(yamling.dump_yaml(design_document(design, scheme)))


def _decode_side(entries: list[dict[str, Any]]) -> list[np.ndarray]:
    return [decode_matrix(e["matrix"]) for e in sorted(entries, key=lambda e: e["node"])]


def parse_design(data: dict[str, Any], source: str = "<string>") -> LoadedDesign:
    """Rebuild a design from a loaded design document.

    Raises:
        ScenarioParseError: If a section is missing or malformed
        ScenarioValidationError: If the embedded scenario is invalid
    """
    try:
        scenario_file = ScenarioFile.model_validate(data["scenario"])
    except ValidationError as exc:
        raise validation_error(exc) from exc
    except (KeyError, TypeError) as exc:
        msg = f"{source}: missing scenario section"
        raise ScenarioParseError(msg) from exc
    scenario = scenario_file.to_scenario()
    try:
        sides = {
            (int(e["tx"]), int(e["rx"])): NullingSide(e["side"])
            for e in data["assignment"]["links"]
        }
        capacity = int(data["assignment"]["capacity"])
        assignment = NullingAssignment(scenario.K, capacity, sides)
        tx = _decode_side(data["tx"])
        rx = _decode_side(data["rx"])
        method = str(data["method"])
        design = fixed_design(
            scenario, assignment, tx, rx, method=method, source="loaded"
        )
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"{source}: malformed design ({exc})"
        raise ScenarioParseError(msg) from exc
    return LoadedDesign(
        design=design,
        scenario_file=scenario_file,
        recorded_leakage_max=data.get("leakage_max"),
        recorded_certified=data.get("certified"),
    )


def load_design(path: str | os.PathLike[str]) -> LoadedDesign:
    try:
        text = upath.UPath(path).read_text(encoding="utf-8")
        data = yamling.load_yaml(text)
    except OSError as exc:
        msg = f"cannot read {path}: {exc.strerror or exc}"
        raise ScenarioParseError(msg) from exc
    except Exception as exc:  # yamling may wrap the parser error
        msg = f"{path}: malformed YAML"
        raise ScenarioParseError(msg) from exc
    if not isinstance(data, dict):
        msg = f"{path}: expected a design mapping"
        raise ScenarioParseError(msg, line=1)
    logger.debug("Loaded design from %s", path)
    return parse_design(data, source=str(path))

"""Scenario files: the YAML documents every command starts from."""

from __future__ import annotations

from collections.abc import Sequence
import os
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
import upath
import yamling

from polarzf import telemetry
from polarzf.exceptions import ScenarioParseError, ScenarioValidationError
from polarzf.geometry import (
    DEFAULT_BOX,
    DEFAULT_WAVENUMBER,
    Scenario,
    random_generic_scenario,
    suggested_min_angle_sep,
)
from polarzf.polarization.dipoles import COMPONENT_ORDER, DipoleConfig
from polarzf.scenarioconfig.base import ConfigFile


logger = telemetry.get_logger(__name__)

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
Point = tuple[FiniteFloat, FiniteFloat]
Tokens = str | list[str]
Scheme = Literal["fixed-zf", "optimal-placement"]

DEFAULT_COMPONENTS = " ".join(c.token for c in COMPONENT_ORDER)
DEFAULT_SNR_GRID = tuple(10.0**e for e in range(11))


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ExplicitPlacement(_Section):
    tx: list[Point]
    """Transmitter coordinates in meters."""
    rx: list[Point]
    """Receiver coordinates in meters."""
    offsets: list[Point] | None = None
    """Array offsets shared by every node, first one at the origin."""
    seed: int = 0


class RandomPlacement(_Section):
    random: Literal[True] = True
    seed: int = 0
    min_angle_sep: PositiveFloat | None = None
    """Required genericity margin; defaults to a value reachable for K."""
    box: PositiveFloat = DEFAULT_BOX


class NodeComponents(_Section):
    dipoles: Tokens
    rotation: FiniteFloat = 0.0
    """Physical rotation of the in-plane dipoles, radians."""

    @field_validator("dipoles")
    @classmethod
    def _valid_tokens(cls, value: Tokens) -> Tokens:
        DipoleConfig.from_tokens(value)
        return value

    def to_config(self) -> DipoleConfig:
        return DipoleConfig.from_tokens(self.dipoles, self.rotation)


type NodeEntry = Tokens | NodeComponents


def _entry_config(entry: NodeEntry) -> DipoleConfig:
    if isinstance(entry, NodeComponents):
        return entry.to_config()
    return DipoleConfig.from_tokens(entry)


class PerNodeComponents(_Section):
    tx: list[Tokens | NodeComponents]
    rx: list[Tokens | NodeComponents] | None = None

    @field_validator("tx", "rx")
    @classmethod
    def _valid_entries(cls, value: list[NodeEntry] | None) -> list[NodeEntry] | None:
        for entry in value or []:
            if not isinstance(entry, NodeComponents):
                DipoleConfig.from_tokens(entry)
        return value


class ScenarioFile(ConfigFile):
    """Schema of a scenario file.

    Only `k` is required; everything else has a default (one antenna, all
    six dipoles, random generic placement with seed 0, fixed zero-forcing).
    """

    k: Annotated[int, Field(ge=1)]
    m: Annotated[int, Field(ge=1)] = 1
    wavenumber: PositiveFloat = DEFAULT_WAVENUMBER
    placement: ExplicitPlacement | RandomPlacement = Field(
        default_factory=RandomPlacement
    )
    components: Tokens | PerNodeComponents = DEFAULT_COMPONENTS
    scheme: Scheme = "fixed-zf"
    snr_grid: list[PositiveFloat] = Field(default_factory=lambda: list(DEFAULT_SNR_GRID))

    @field_validator("components")
    @classmethod
    def _valid_components(
        cls, value: Tokens | PerNodeComponents
    ) -> Tokens | PerNodeComponents:
        if not isinstance(value, PerNodeComponents):
            DipoleConfig.from_tokens(value)
        return value

    @field_validator("snr_grid")
    @classmethod
    def _sorted_grid(cls, value: list[float]) -> list[float]:
        if not value:
            msg = "needs at least one SNR"
            raise ValueError(msg)
        return sorted(set(value))

    def with_seed(self, seed: int | None) -> ScenarioFile:
        """Copy with the placement seed replaced (unchanged for None)."""
        if seed is None:
            return self
        placement = self.placement.model_copy(update={"seed": seed})
        return self.model_copy(update={"placement": placement})

    def node_configs(self) -> tuple[list[DipoleConfig], list[DipoleConfig]]:
        """Transmitter and receiver configs, one per node."""
        if not isinstance(self.components, PerNodeComponents):
            config = DipoleConfig.from_tokens(self.components)
            return [config] * self.k, [config] * self.k
        tx = [_entry_config(e) for e in self.components.tx]
        rx_entries = self.components.rx
        if rx_entries is None:
            rx_entries = self.components.tx
        rx = [_entry_config(e) for e in rx_entries]
        for name, configs in (("tx", tx), ("rx", rx)):
            if len(configs) != self.k:
                msg = f"expected {self.k} entries, got {len(configs)}"
                raise ScenarioValidationError(msg, field=f"components.{name}")
        return tx, rx

    def to_scenario(self) -> Scenario:
        """Build the validated scenario this file describes.

        Raises:
            ScenarioValidationError: If the file is inconsistent (e.g. wrong
                number of positions for k)
            NonGenericGeometryError: If a random placement cannot be made generic
        """
        tx_cfg, rx_cfg = self.node_configs()
        placement = self.placement
        if isinstance(placement, RandomPlacement):
            sep = placement.min_angle_sep or suggested_min_angle_sep(self.k)
            scenario = random_generic_scenario(
                self.k,
                self.m,
                placement.seed,
                sep,
                components=tx_cfg,
                rx_components=rx_cfg,
                box=placement.box,
                wavenumber=self.wavenumber,
            )
            return scenario
        for name in ("tx", "rx"):
            if len(getattr(placement, name)) != self.k:
                msg = f"expected {self.k} positions, got {len(getattr(placement, name))}"
                raise ScenarioValidationError(msg, field=f"placement.{name}")
        return Scenario.build(
            placement.tx,
            placement.rx,
            M=self.m,
            antenna_offsets=placement.offsets,
            wavenumber=self.wavenumber,
            tx_components=tx_cfg,
            rx_components=rx_cfg,
            seed=placement.seed,
        )

    @classmethod
    def from_scenario(
        cls,
        scenario: Scenario,
        scheme: Scheme = "fixed-zf",
        snr_grid: Sequence[float] = DEFAULT_SNR_GRID,
    ) -> ScenarioFile:
        """Explicit scenario file that parses back to `scenario`."""

        def entries(configs: Sequence[DipoleConfig]) -> list[NodeEntry]:
            return [
                NodeComponents(dipoles=c.tokens, rotation=c.azimuth_rotation)
                for c in configs
            ]

        return cls(
            k=scenario.K,
            m=scenario.M,
            wavenumber=scenario.wavenumber,
            placement=ExplicitPlacement(
                tx=list(scenario.tx_positions),
                rx=list(scenario.rx_positions),
                offsets=list(scenario.antenna_offsets),
                seed=scenario.seed,
            ),
            components=PerNodeComponents(
                tx=entries(scenario.tx_components),
                rx=entries(scenario.rx_components),
            ),
            scheme=scheme,
            snr_grid=list(snr_grid),
        )


def _yaml_line(exc: BaseException) -> int | None:
    """1-based line of a YAML error, looking through wrapped exceptions."""
    while exc is not None:
        mark = getattr(exc, "problem_mark", None) or getattr(exc, "context_mark", None)
        if mark is not None:
            return mark.line + 1
        exc = exc.__cause__ or exc.__context__  # type: ignore[assignment]
    return None


def _field_path(error: dict[str, Any]) -> str:
    loc = [str(part) for part in error["loc"]]
    # drop pydantic's union member tags such as "ExplicitPlacement"
    return ".".join(p for p in loc if not p[:1].isupper() and "[" not in p and p != "str")


def validation_error(exc: ValidationError) -> ScenarioValidationError:
    first = exc.errors()[0]
    return ScenarioValidationError(first["msg"], field=_field_path(first) or None)


def parse_scenario_text(text: str, source: str = "<string>") -> ScenarioFile:
    """Parse YAML text into a ScenarioFile.

    Raises:
        ScenarioParseError: On malformed YAML or a non-mapping document
        ScenarioValidationError: If a key is unknown or a value invalid
    """
    try:
        data = yamling.load_yaml(text)
    except Exception as exc:  # yamling may wrap the parser error
        msg = f"{source}: malformed YAML ({getattr(exc, 'problem', None) or exc})"
        raise ScenarioParseError(msg, line=_yaml_line(exc)) from exc
    if not isinstance(data, dict):
        msg = f"{source}: expected a mapping of keys to values"
        raise ScenarioParseError(msg, line=1)
    try:
        return ScenarioFile.model_validate({**data, "config_file_path": source})
    except ValidationError as exc:
        raise validation_error(exc) from exc


def load_scenario_file(path: str | os.PathLike[str]) -> ScenarioFile:
    file = upath.UPath(path)
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {path}: {exc.strerror or exc}"
        raise ScenarioParseError(msg) from exc
    return parse_scenario_text(text, source=str(path))


def parse_scenario(path: str | os.PathLike[str]) -> Scenario:
    """Read, validate and build the scenario stored at `path`."""
    scenario_file = load_scenario_file(path)
    scenario = scenario_file.to_scenario()
    logger.info("Loaded %s from %s", scenario.identifier, path)
    return scenario


def write_scenario_file(
    scenario_file: ScenarioFile, path: str | os.PathLike[str]
) -> None:
    upath.UPath(path).write_text(scenario_file.to_yaml(), encoding="utf-8")


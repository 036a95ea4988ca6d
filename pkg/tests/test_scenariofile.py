from __future__ import annotations

import pytest

from polarzf.exceptions import ScenarioParseError, ScenarioValidationError
from polarzf.geometry import random_generic_scenario
from polarzf.polarization.dipoles import FULL, IN_PLANE_FOUR
from polarzf.scenarioconfig.scenariofile import (
    RandomPlacement,
    ScenarioFile,
    load_scenario_file,
    parse_scenario,
    parse_scenario_text,
    write_scenario_file,
)
from polarzf.zfdesign.assignment import assign_for_scenario


def test_minimal_file():
    scenario_file = parse_scenario_text("k: 3\n")
    assert scenario_file.m == 1
    assert scenario_file.scheme == "fixed-zf"
    assert isinstance(scenario_file.placement, RandomPlacement)
    scenario = scenario_file.to_scenario()
    assert scenario.K == 3
    assert scenario.M == 1
    assert scenario.seed == 0
    assert all(c == FULL for c in scenario.tx_components)


def test_two_dipole_components():
    scenario = parse_scenario_text("k: 5\ncomponents: ex ey\n").to_scenario()
    assert {c.size for c in (*scenario.tx_components, *scenario.rx_components)} == {2}


def test_seven_users_on_one_antenna_parse():
    scenario = parse_scenario_text("k: 7\nm: 1\nscheme: fixed-zf\n").to_scenario()
    assert not assign_for_scenario(scenario).complete


def test_snr_grid_is_sorted():
    scenario_file = parse_scenario_text("k: 1\nsnr_grid: [100, 1, 100]\n")
    assert scenario_file.snr_grid == [1.0, 100.0]


@pytest.mark.parametrize(
    ("text", "field"),
    [
        ("k: 3\ncolour: red\n", "colour"),
        ("k: 0\n", "k"),
        ("k: 3\nwavenumber: .inf\n", "wavenumber"),
        ("k: 2\ncomponents: ex qq\n", "components"),
        ("k: 2\nscheme: magic\n", "scheme"),
        ("k: 2\nsnr_grid: []\n", "snr_grid"),
    ],
)
def test_invalid_values(text, field):
    with pytest.raises(ScenarioValidationError) as exc_info:
        parse_scenario_text(text)
    assert exc_info.value.field == field


def test_position_count_must_match_k():
    text = "k: 3\nplacement:\n  tx: [[0, 0], [1, 1]]\n  rx: [[5, 0], [6, 1], [7, 2]]\n"
    with pytest.raises(ScenarioValidationError) as exc_info:
        parse_scenario_text(text).to_scenario()
    assert exc_info.value.field == "placement.tx"


def test_per_node_component_count_must_match_k():
    text = "k: 3\ncomponents:\n  tx: [ex ey mx my, ex ey mx my]\n"
    with pytest.raises(ScenarioValidationError) as exc_info:
        parse_scenario_text(text).node_configs()
    assert exc_info.value.field == "components.tx"


def test_per_node_components():
    text = (
        "k: 2\n"
        "components:\n"
        "  tx: [ex ey mx my, {dipoles: ex ey ez mx my mz, rotation: 0.5}]\n"
        "  rx: [ex ey ez mx my mz, ex ey mx my]\n"
    )
    tx, rx = parse_scenario_text(text).node_configs()
    assert tx[0] == IN_PLANE_FOUR
    assert tx[1] == FULL.rotated(0.5)
    assert rx == [FULL, IN_PLANE_FOUR]


def test_malformed_yaml():
    with pytest.raises(ScenarioParseError, match="malformed YAML") as exc_info:
        parse_scenario_text("k: 3\nplacement: [1, 2\n")
    assert exc_info.value.line is not None


def test_document_must_be_a_mapping():
    with pytest.raises(ScenarioParseError) as exc_info:
        parse_scenario_text("- k\n- 3\n")
    assert exc_info.value.line == 1


def test_with_seed():
    scenario_file = parse_scenario_text("k: 2\nplacement: {random: true, seed: 4}\n")
    assert scenario_file.with_seed(None) is scenario_file
    assert scenario_file.with_seed(9).placement.seed == 9
    assert scenario_file.with_seed(9).to_scenario().seed == 9


def test_explicit_round_trip():
    scenario = random_generic_scenario(3, 2, seed=12)
    scenario = scenario.with_components([FULL, FULL.rotated(0.3), IN_PLANE_FOUR])
    scenario_file = ScenarioFile.from_scenario(scenario, snr_grid=[1.0, 10.0])
    parsed = parse_scenario_text(scenario_file.to_yaml())
    assert parsed.to_scenario() == scenario
    assert parsed.snr_grid == [1.0, 10.0]


def test_file_io(tmp_path):
    path = tmp_path / "scenarios" / "k2.yml"
    path.parent.mkdir()
    scenario = random_generic_scenario(2, seed=1)
    write_scenario_file(ScenarioFile.from_scenario(scenario), path)
    assert load_scenario_file(path).config_file_path == str(path)
    assert parse_scenario(path) == scenario


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioParseError, match="cannot read"):
        load_scenario_file(tmp_path / "missing.yml")


def test_bundled_configs(configs_dir):
    paths = sorted(configs_dir.glob("k*.yml"))
    assert paths
    for path in paths:
        scenario_file = load_scenario_file(path)
        assert scenario_file.to_scenario().K == scenario_file.k


if __name__ == "__main__":
    pytest.main([__file__])

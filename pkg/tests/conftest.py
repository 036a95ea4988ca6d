from __future__ import annotations

import pathlib

import pytest

from polarzf.geometry import random_generic_scenario
from polarzf.polarization.dipoles import FULL, IN_PLANE_FOUR
from polarzf.zfdesign.assignment import assign_for_scenario
from polarzf.zfdesign.design import design_zf


CONFIGS = pathlib.Path(__file__).parent.parent / "configs"


@pytest.fixture(scope="session")
def configs_dir() -> pathlib.Path:
    return CONFIGS


@pytest.fixture(scope="session")
def four_dipole_scenario():
    return random_generic_scenario(3, seed=11, components=IN_PLANE_FOUR)


@pytest.fixture(scope="session")
def six_dipole_scenario():
    return random_generic_scenario(5, seed=5, components=FULL)


@pytest.fixture(scope="session")
def four_dipole_design(four_dipole_scenario):
    return design_zf(four_dipole_scenario, assign_for_scenario(four_dipole_scenario))


@pytest.fixture(scope="session")
def six_dipole_design(six_dipole_scenario):
    return design_zf(six_dipole_scenario, assign_for_scenario(six_dipole_scenario))

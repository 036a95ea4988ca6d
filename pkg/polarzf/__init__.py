__version__ = "0.1.0"


from . import telemetry

telemetry.setup_logfire()

from .geometry import Scenario, link_geometry, random_generic_scenario
from .zfdesign.assignment import assign_nulling
from .zfdesign.design import design_zf


__all__ = [
    "Scenario",
    "assign_nulling",
    "design_zf",
    "link_geometry",
    "random_generic_scenario",
]

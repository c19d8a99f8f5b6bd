"""SIMPS: sociology-driven personal mobility simulator and contact analysis."""

from .scenario import Scenario, load_scenario, parse_scenario
from .simulator import initialize, run, step

__all__ = ["Scenario", "initialize", "load_scenario", "parse_scenario", "run", "step"]
__version__ = "0.1.0"

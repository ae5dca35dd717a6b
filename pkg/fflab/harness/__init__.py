"""
Scenario registry, runner, baselines and reports.
"""

from .baselines import BaselineStore, regenerate
from .runner import ScenarioReport, SweepResult, run_scenario, sweep, write_reports
from .scenario import Outcome, Parameters, Scenario, ScenarioContext, ScenarioKind, Status, all_scenarios, get_scenario

__all__ = [
    "BaselineStore",
    "Outcome",
    "Parameters",
    "Scenario",
    "ScenarioContext",
    "ScenarioKind",
    "ScenarioReport",
    "Status",
    "SweepResult",
    "all_scenarios",
    "get_scenario",
    "regenerate",
    "run_scenario",
    "sweep",
    "write_reports",
]

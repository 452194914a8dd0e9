from .operator import OperatorParams, ScriptedOperator
from .runner import SessionMetrics, compute_metrics, parse_mode, run_headless
from .scenario import Scenario, load_scenario, scenario_from_dict
from .world import Peg, PegWorld, Ring, RingSize, RingState

__all__ = [
    "OperatorParams",
    "Peg",
    "PegWorld",
    "Ring",
    "RingSize",
    "RingState",
    "Scenario",
    "ScriptedOperator",
    "SessionMetrics",
    "compute_metrics",
    "load_scenario",
    "parse_mode",
    "run_headless",
    "scenario_from_dict",
]

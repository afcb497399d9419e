"""Discrete-event simulation of the waterfall lifecycle with shared staff pools."""

from .kernel import ContractViolation, ResourcePool, Simulation, StarvationError
from .metrics import RunSummary, StatSummary, summarize
from .model import ConfigError, Phase, ScenarioConfig, rework_target, run_scenario
from .optimizer import OptimizerConfig, OptimizerResult, find_zero_wait
from .scenario import load_scenario

__all__ = [
    "ConfigError",
    "ContractViolation",
    "OptimizerConfig",
    "OptimizerResult",
    "Phase",
    "ResourcePool",
    "RunSummary",
    "ScenarioConfig",
    "Simulation",
    "StarvationError",
    "StatSummary",
    "find_zero_wait",
    "load_scenario",
    "rework_target",
    "run_scenario",
    "summarize",
]

__version__ = "0.1.0"

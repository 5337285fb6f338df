from .calibration import CalibrationResult, calibrate
from .checks import CHECKS, CheckResult, ScenarioReport, check_scenario, run_checks, run_scenario
from .evaluation import run_suite, summarize, to_json, write_evaluation_report
from .oracle import (
    ConvergenceReport,
    OracleSolution,
    breaking_time,
    convergence_study,
    empirical_order,
    first_shock_time,
    l1_error,
    oracle_burgers,
    oracle_solution,
    refinement_shift,
    sample_run,
)

__all__ = [
    "CalibrationResult",
    "calibrate",
    "CHECKS",
    "CheckResult",
    "ScenarioReport",
    "check_scenario",
    "run_checks",
    "run_scenario",
    "run_suite",
    "summarize",
    "to_json",
    "write_evaluation_report",
    "ConvergenceReport",
    "OracleSolution",
    "breaking_time",
    "convergence_study",
    "empirical_order",
    "first_shock_time",
    "l1_error",
    "oracle_burgers",
    "oracle_solution",
    "refinement_shift",
    "sample_run",
]

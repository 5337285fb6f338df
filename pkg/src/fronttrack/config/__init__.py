from .expressions import compile_expression
from .scenario import (
    CHECK_NAMES,
    DEFAULT_CALIBRATION,
    DEFAULT_CHECKS,
    SCHEMA_VERSION,
    CharacteristicSeed,
    IntervalUnion,
    OracleOptions,
    ScenarioConfig,
    Suite,
    build_datum,
    load_suite,
    scenario_from_dict,
    suite_from_dict,
    write_calibration,
)

__all__ = [
    "compile_expression",
    "CHECK_NAMES",
    "DEFAULT_CALIBRATION",
    "DEFAULT_CHECKS",
    "SCHEMA_VERSION",
    "CharacteristicSeed",
    "IntervalUnion",
    "OracleOptions",
    "ScenarioConfig",
    "Suite",
    "build_datum",
    "load_suite",
    "scenario_from_dict",
    "suite_from_dict",
    "write_calibration",
]

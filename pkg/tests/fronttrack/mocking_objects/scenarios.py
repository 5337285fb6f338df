import json
from pathlib import Path
from typing import Any, Dict, List

from fronttrack.config.scenario import ScenarioConfig, scenario_from_dict
from fronttrack.engine.initial import sample_initial_datum
from fronttrack.engine.records import RunLog
from fronttrack.engine.tracking import run

BURGERS = {"kind": "burgers"}
P_SYSTEM = {"kind": "p_system", "gamma": 2.0}
GN_LD_SYSTEM = {
    "kind": "polynomial",
    "name": "burgers_with_transport",
    "terms": [
        [{"coeff": 0.5, "powers": [2, 0]}],
        [{"coeff": 1.0, "powers": [0, 1]}],
    ],
    "fields": ["gn", "ld"],
    "box": [[-0.5, 0.5], [-1.0, 1.0]],
    "gn_constant": 1.0,
}

# two Burgers shocks of strength -0.3 (speeds 0.85 and 0.55) meeting at t = 5/3, x = 11/12
SHOCK_MERGE: Dict[str, Any] = {
    "name": "shock_merge",
    "system": BURGERS,
    "datum": {"kind": "steps", "breakpoints": [-0.5, 0.0], "states": [[1.0], [0.7], [0.4]]},
    "run": {"nu": 0.05, "horizon": 3.0},
}
MERGE_TIME = 5.0 / 3.0
MERGE_POSITION = 11.0 / 12.0

# a fan (speeds 0.5625 .. 0.9375) catching a -0.5 shock: it drops to -0.375 at t = 4/3, x = 1
# and to -0.25 at t = 8/3
FAN_CATCHES_SHOCK: Dict[str, Any] = {
    "name": "fan_catches_shock",
    "system": BURGERS,
    "datum": {"kind": "steps", "breakpoints": [-0.25, 0.0], "states": [[0.5], [1.0], [0.5]]},
    "run": {"nu": 0.125, "horizon": 4.0},
}

# a left-moving shock and a fan that never catch up before t = 10
INTERACTION_FREE: Dict[str, Any] = {
    "name": "interaction_free",
    "system": BURGERS,
    "datum": {"kind": "steps", "breakpoints": [-1.0, 1.0], "states": [[0.0], [-0.5], [0.5]]},
    "run": {"nu": 0.1, "horizon": 2.0},
}

RAREFACTION: Dict[str, Any] = {
    "name": "rarefaction",
    "system": BURGERS,
    "datum": {"kind": "riemann", "left": [0.0], "right": [1.0]},
    "run": {"nu": 0.25, "horizon": 2.0},
}

SHOCK: Dict[str, Any] = {
    "name": "shock",
    "system": BURGERS,
    "datum": {"kind": "riemann", "left": [1.0], "right": [0.0]},
    "run": {"nu": 0.05, "horizon": 2.0},
}

RAMP: Dict[str, Any] = {
    "name": "ramp",
    "system": BURGERS,
    "datum": {"kind": "sampled", "expression": "clip(-0.4*x, -0.4, 0.4)", "cells": 40, "domain": [-2.0, 2.0]},
    "run": {"nu": 0.02, "horizon": 4.0},
}

P_SYSTEM_ROUND_TRIP: Dict[str, Any] = {
    "name": "p_system_round_trip",
    "system": P_SYSTEM,
    "datum": {"kind": "riemann", "left": [1.0, 0.0], "strengths": [0.08, -0.06]},
    "run": {"nu": 0.02, "horizon": 1.0},
}

GN_LD: Dict[str, Any] = {
    "name": "gn_ld",
    "system": GN_LD_SYSTEM,
    "datum": {"kind": "riemann", "left": [0.3, 0.0], "right": [-0.1, 0.2]},
    "run": {"nu": 0.05, "horizon": 2.0},
}


def scenario(data: Dict[str, Any], **overrides: Any) -> ScenarioConfig:
    return scenario_from_dict({**data, **overrides})


def run_log(data: Dict[str, Any], **overrides: Any) -> RunLog:
    config = scenario(data, **overrides)
    model = config.build_model()
    params = config.build_params()
    initial = sample_initial_datum(model, config.build_datum(), params.nu, params.tv_guard)
    return run(model, params, initial)


def write_suite(path: Path, scenarios: List[Dict[str, Any]], calibration: Dict[str, float] | None = None) -> Path:
    suite: Dict[str, Any] = {"schema_version": 1, "scenarios": scenarios}
    if calibration is not None:
        suite["calibration"] = calibration
    path.write_text(json.dumps(suite, indent=2), encoding="utf-8")
    return path

import json
from pathlib import Path

import numpy as np
import pytest
import yaml

from fronttrack.config.expressions import compile_expression
from fronttrack.config.scenario import (
    DEFAULT_CHECKS,
    DEFAULT_DECAY_UNIONS,
    DEFAULT_REGIONS,
    UNOBSERVED,
    load_suite,
    suite_from_dict,
    write_calibration,
)
from fronttrack.engine.initial import RiemannDatum, SampledDatum, StepsDatum
from fronttrack.errors import ConfigError

from mocking_objects.scenarios import P_SYSTEM_ROUND_TRIP, RAMP, SHOCK_MERGE, scenario, write_suite


def test_expressions_evaluate_piecewise_functions():
    ramp = compile_expression("clip(-0.4*x, -0.4, 0.4)")
    pulse = compile_expression("0.5*sin(pi*x) if abs(x) < 1 else 0")
    vector = compile_expression("[1 + x**2, -x]")

    assert ramp(-2.0) == pytest.approx(0.4)
    assert ramp(0.5) == pytest.approx(-0.2)
    assert pulse(0.5) == pytest.approx(0.5)
    assert pulse(3.0) == 0.0
    assert vector(2.0) == pytest.approx([5.0, -2.0])


@pytest.mark.parametrize(
    "source",
    ["__import__('os')", "x.real", "open('f')", "lambda y: y", "'text'", "x == 1", "sin(x=1)", ""],
)
def test_expressions_reject_everything_else(source):
    with pytest.raises(ConfigError):
        compile_expression(source)


def test_expression_errors_name_the_point():
    f = compile_expression("1 / x")

    with pytest.raises(ConfigError, match="x=0"):
        f(0.0)


def test_scenario_builds_model_datum_and_params():
    config = scenario(SHOCK_MERGE)

    datum = config.build_datum()
    params = config.build_params()

    assert isinstance(datum, StepsDatum)
    assert config.build_model().is_scalar
    assert params.nu == pytest.approx(0.05)
    assert params.horizon == pytest.approx(3.0)
    assert config.build_params(nu=0.01).nu == pytest.approx(0.01)
    assert config.checks == DEFAULT_CHECKS
    assert config.regions == DEFAULT_REGIONS == 100
    assert config.decay_unions == DEFAULT_DECAY_UNIONS == 50
    assert params.case_split == pytest.approx(0.25)


def test_strengths_datum_ends_on_the_composite_curve():
    config = scenario(P_SYSTEM_ROUND_TRIP)

    datum = config.build_datum()

    assert isinstance(datum, RiemannDatum)
    assert datum.right.shape == (2,)
    assert not np.allclose(datum.left, datum.right)


def test_sampled_datum_keeps_its_expression():
    datum = scenario(RAMP).build_datum()

    assert isinstance(datum, SampledDatum)
    assert datum.cells == 40
    assert datum.domain == (-2.0, 2.0)


@pytest.mark.parametrize(
    "overrides",
    [
        {"colour": "red"},
        {"run": {"nu": 0.05}},
        {"run": {"nu": 0.05, "horizon": 1.0, "speed": 2}},
        {"checks": ["replay", "teleport"]},
        {"datum": {"kind": "riemann", "left": [1.0], "right": [0.0], "strengths": [-1.0]}},
        {"datum": {"kind": "waves"}},
        {"system": {"kind": "burgers", "gamma": 1.4}},
        {"ladder": [[0.2, 0.1]]},
        {"characteristics": [{"t0": 0.0, "x0": 0.0, "family": 2, "tau": 1.0}]},
        {"interval_unions": [{"t0": 2.0, "tau": 2.0, "intervals": [[0.0, 1.0]]}]},
        {"checks": ["oracle"], "system": {"kind": "p_system"}, "datum": {"kind": "riemann", "left": [1.0, 0.0], "right": [1.0, 0.1]}},
    ],
)
def test_invalid_scenarios_are_config_errors(overrides):
    with pytest.raises(ConfigError):
        scenario(SHOCK_MERGE, **overrides)


def test_suite_loading_from_json(tmp_path: Path):
    path = write_suite(tmp_path / "suite.json", [SHOCK_MERGE, P_SYSTEM_ROUND_TRIP], calibration={"region": 3.0})

    suite = load_suite(path)

    assert suite.names() == ["shock_merge", "p_system_round_trip"]
    assert suite.constant("region") == 3.0
    assert suite.constant("positive_decay") == pytest.approx(1.1)
    assert [s.name for s in suite.select("shock_merge")] == ["shock_merge"]
    with pytest.raises(ConfigError):
        suite.select("missing")


def test_suite_loading_from_yaml(tmp_path: Path):
    path = tmp_path / "suite.yaml"
    path.write_text(yaml.safe_dump({"schema_version": 1, "scenarios": [SHOCK_MERGE]}), encoding="utf-8")

    assert load_suite(path).names() == ["shock_merge"]


def test_single_scenario_file(tmp_path: Path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"schema_version": 1, **SHOCK_MERGE}), encoding="utf-8")

    assert load_suite(path).names() == ["shock_merge"]


def test_suite_level_errors(tmp_path: Path):
    with pytest.raises(ConfigError):
        suite_from_dict({"schema_version": 2, "scenarios": [SHOCK_MERGE]})
    with pytest.raises(ConfigError):
        suite_from_dict({"schema_version": 1, "scenarios": [SHOCK_MERGE, SHOCK_MERGE]})
    with pytest.raises(ConfigError):
        suite_from_dict({"schema_version": 1, "scenarios": []})
    with pytest.raises(ConfigError):
        suite_from_dict({"schema_version": 1, "scenarios": [SHOCK_MERGE], "calibration": {"region": -1.0}})
    with pytest.raises(ConfigError):
        load_suite(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_suite(broken)


def test_write_calibration_keeps_the_scenarios(tmp_path: Path):
    path = write_suite(tmp_path / "suite.json", [SHOCK_MERGE])

    write_calibration(path, {"region": 2.5, "terminal": 1.5})

    suite = load_suite(path)
    assert suite.names() == ["shock_merge"]
    assert suite.constant("region") == 2.5
    assert suite.constant("terminal") == 1.5


def test_write_calibration_records_where_each_constant_came_from(tmp_path: Path):
    path = write_suite(tmp_path / "suite.json", [SHOCK_MERGE])

    write_calibration(path, {"region": 2.5, "terminal": 1.5}, sources={"region": "shock_merge"})

    suite = load_suite(path)
    assert suite.calibration_sources == {"region": "shock_merge", "terminal": UNOBSERVED}


def test_calibration_sources_must_name_suite_scenarios():
    with pytest.raises(ConfigError, match="elsewhere"):
        suite_from_dict({"schema_version": 1, "scenarios": [SHOCK_MERGE], "calibration_sources": {"region": "elsewhere"}})
    with pytest.raises(ConfigError):
        suite_from_dict({"schema_version": 1, "scenarios": [SHOCK_MERGE], "calibration_sources": {"speed": "shock_merge"}})


def test_reference_suite():
    suite = load_suite(Path(__file__).parents[2] / "configs" / "desk_suite.json")

    assert len(suite.scenarios) >= 20
    oracles = [s for s in suite.scenarios if s.oracle is not None]
    assert len(oracles) >= 3
    for config in oracles:
        assert config.oracle.nus == (0.1, 0.05, 0.025)
        assert config.oracle.min_order == pytest.approx(0.8)
    assert all(s.regions >= 100 for s in suite.scenarios if "regions" in s.checks)
    (ramp,) = suite.select("burgers_ramp_breaking")
    assert ramp.decay_unions == 50 and not ramp.interval_unions
    assert set(suite.calibration_sources) == set(suite.calibration)

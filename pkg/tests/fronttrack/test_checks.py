import argparse
import json
import math
from pathlib import Path

import pytest

from fronttrack.evaluation.calibration import calibrate
from fronttrack.evaluation.checks import CheckResult, ScenarioReport, check_scenario, run_checks
from fronttrack.evaluation.evaluation import run_suite, summarize, write_evaluation_report

from mocking_objects.scenarios import MERGE_TIME, RAREFACTION, SHOCK_MERGE, run_log, scenario

RUN_LEVEL = ["replay", "lax", "rh", "glimm", "identities", "jump_cases", "terminal", "exceptional", "ladder"]


def test_run_level_checks_pass_on_the_merge():
    config = scenario(SHOCK_MERGE)
    log = run_log(SHOCK_MERGE)

    results = {r.name: r for r in run_checks(log, config, only=RUN_LEVEL)}

    assert all(r.passed for r in results.values()), [r.to_dict() for r in results.values() if not r.passed]
    assert results["replay"].details["slabs"] == 2
    assert results["glimm"].details["mu_I_total"] == pytest.approx(0.09)
    assert results["terminal"].details["checked"] == 0
    assert results["jump_cases"].details["cases"]["triple"] == 2
    # two tracked initial shocks at each of the two ladder levels
    assert results["jump_cases"].details["cases"]["initial"] == 4
    assert results["ladder"].details["nested"]
    (found,) = results["exceptional"].details["times"]
    assert found["t"] == pytest.approx(MERGE_TIME)


def test_region_and_decay_checks_on_a_rarefaction():
    data = {**RAREFACTION, "regions": 0, "interval_unions": [{"t0": 0.0, "tau": 1.5, "intervals": [[-0.5, 0.5]]}]}
    config = scenario(data)
    log = run_log(data)

    results = {r.name: r for r in run_checks(log, config, only=["regions", "positive_decay", "cont_decay"])}

    assert all(r.passed for r in results.values())
    assert results["regions"].details["checked"] == 1
    assert results["cont_decay"].details["checked"] == 1
    assert results["positive_decay"].ratios["positive_decay"] == pytest.approx(1.0, rel=1e-6)


def test_unknown_check_name():
    config = scenario(SHOCK_MERGE)

    with pytest.raises(KeyError):
        run_checks(run_log(SHOCK_MERGE), config, only=["telepathy"])


def test_engine_alarm_becomes_a_failed_report():
    config = scenario(SHOCK_MERGE, run={"nu": 0.05, "horizon": 3.0, "max_fronts": 2})

    report = check_scenario(config)

    assert not report.passed
    assert report.error.startswith("FrontCountExplosionError")
    assert report.checks == []


def _report(name: str, ratios: dict) -> ScenarioReport:
    return ScenarioReport(name, [CheckResult("regions", True, ratios=ratios)], runtime=0.0, events=0, fronts=0)


def test_calibration_doubles_the_largest_ratio():
    result = calibrate([_report("a", {"region": 0.3}), _report("b", {"region": 1.2, "terminal": math.inf})])

    assert result.constants["region"] == pytest.approx(2.4)
    assert result.sources["region"] == "b"
    assert result.constants["terminal"] == pytest.approx(4.0)
    assert result.unbounded == ["b:terminal"]


def test_calibration_never_goes_below_one():
    result = calibrate([_report("a", {"wave_balance": 0.1})], current={"cont_decay": 3.0})

    assert result.constants["wave_balance"] == 1.0
    assert result.constants["cont_decay"] == 3.0
    assert result.to_dict()["observed"] == {"wave_balance": 0.1}


def test_suite_report_is_written_with_runtime(tmp_path: Path):
    checks = ["replay", "glimm"]
    configs = [scenario(SHOCK_MERGE, checks=checks), scenario(RAREFACTION, checks=checks)]

    reports = run_suite(configs)
    args = argparse.Namespace(command="report", config="suite.json", scenario=None, jobs=1)
    path = write_evaluation_report(reports, tmp_path, args, runtime=1.5)

    data = json.loads(path.read_text(encoding="utf-8"))
    assert path.name.startswith("evaluation__")
    assert data["Runtime (in seconds)"] == 1.5
    assert data["summary"] == {"scenarios": 2, "passed": 2, "failed": {}}
    assert [r["scenario"] for r in data["reports"]] == ["rarefaction", "shock_merge"]


def test_summary_lists_failures():
    failing = ScenarioReport("x", [CheckResult("lax", False)], runtime=0.0, events=0, fronts=0)
    broken = ScenarioReport("y", [], runtime=0.0, events=0, fronts=0, error="FrontCountExplosionError: cap")

    summary = summarize([failing, broken])

    assert summary["failed"] == {"x": ["lax"], "y": ["FrontCountExplosionError: cap"]}


@pytest.mark.slow
def test_oracle_check_on_a_fan():
    data = {**RAREFACTION, "checks": ["oracle"], "oracle": {"nus": [0.1, 0.05, 0.025], "t": 1.0, "grid": 4096, "min_order": 0.8}}
    config = scenario(data)

    (result,) = run_checks(run_log(data), config)

    assert result.passed, result.details
    assert result.details["shocks"] == []

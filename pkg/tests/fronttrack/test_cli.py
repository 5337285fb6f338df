import json
from pathlib import Path

import pandas as pd
import pytest

from fronttrack.__main__ import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from fronttrack.cli.args import COMMANDS, parse_args
from fronttrack.cli.commands import COMMAND_HANDLERS

from mocking_objects.scenarios import P_SYSTEM_ROUND_TRIP, RAREFACTION, SHOCK, SHOCK_MERGE, write_suite

QUICK_CHECKS = ["replay", "lax", "rh", "glimm", "identities", "jump_cases", "terminal"]


@pytest.fixture
def suite(tmp_path: Path) -> Path:
    scenarios = [
        {**SHOCK_MERGE, "checks": QUICK_CHECKS},
        {**SHOCK, "characteristics": [{"t0": 0.0, "x0": -0.5, "family": 1, "tau": 2.0}]},
        P_SYSTEM_ROUND_TRIP,
    ]
    return write_suite(tmp_path / "suite.json", scenarios)


def test_every_command_has_a_handler():
    assert set(COMMANDS) == set(COMMAND_HANDLERS)


def test_parser_defaults():
    args = parse_args(["check", "--config", "suite.json"])

    assert args.command == "check"
    assert args.log_dir is None
    assert args.jobs == 1
    assert args.out is None


def test_missing_config_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        parse_args(["run"])
    assert info.value.code == 2


def test_riemann_prints_the_recovered_strengths(suite: Path, tmp_path: Path, capsys):
    code = main(["riemann", "--config", str(suite), "--scenario", "p_system_round_trip", "--out", str(tmp_path / "out")])

    printed = capsys.readouterr().out
    assert code == EXIT_OK
    assert "strength recovery error" in printed
    frame = pd.read_csv(tmp_path / "out" / "p_system_round_trip" / "riemann.csv")
    assert set(frame["family"]) == {1, 2}


def test_riemann_needs_a_riemann_datum(suite: Path):
    assert main(["riemann", "--config", str(suite), "--scenario", "shock_merge"]) == EXIT_CONFIG


def test_run_exports_the_log(suite: Path, tmp_path: Path):
    out = tmp_path / "out"

    code = main(["run", "--config", str(suite), "--scenario", "shock_merge", "--out", str(out)])

    assert code == EXIT_OK
    header = json.loads((out / "shock_merge" / "run.json").read_text(encoding="utf-8"))
    assert header["event_count"] == 1
    assert (out / "shock_merge" / "events.jsonl").exists()


def test_run_alarm_exits_with_one_and_keeps_the_partial_log(tmp_path: Path):
    path = write_suite(tmp_path / "capped.json", [{**SHOCK_MERGE, "run": {"nu": 0.05, "horizon": 3.0, "max_fronts": 2}}])

    code = main(["run", "--config", str(path), "--out", str(tmp_path / "out")])

    assert code == EXIT_FAILED
    assert (tmp_path / "out" / "shock_merge" / "run.json").exists()


def test_calibrate_freezes_constants_with_their_sources(tmp_path: Path):
    path = write_suite(tmp_path / "suite.json", [{**RAREFACTION, "checks": ["positive_decay"]}])

    code = main(["calibrate", "--config", str(path), "--out", str(tmp_path / "out"), "--freeze"])

    assert code == EXIT_OK
    frozen = json.loads(path.read_text(encoding="utf-8"))
    assert frozen["calibration_sources"]["positive_decay"] == "rarefaction"
    assert frozen["calibration_sources"]["cont_decay"] == "unobserved"
    assert frozen["calibration"]["positive_decay"] >= 1.0
    measured = json.loads((tmp_path / "out" / "calibration.json").read_text(encoding="utf-8"))
    assert measured["sources"] == {"positive_decay": "rarefaction"}
    assert frozen["calibration"]["positive_decay"] == pytest.approx(max(2.0 * measured["observed"]["positive_decay"], 1.0))


def test_measures_and_fronts_from_an_exported_log(suite: Path, tmp_path: Path):
    out = tmp_path / "out"
    main(["run", "--config", str(suite), "--scenario", "shock_merge", "--out", str(out)])
    log_dir = str(out / "shock_merge")

    assert main(["measures", "--config", str(suite), "--scenario", "shock_merge", "--log", log_dir, "--out", str(out)]) == EXIT_OK
    assert main(["fronts", "--config", str(suite), "--scenario", "shock_merge", "--log", log_dir, "--out", str(out)]) == EXIT_OK

    mu_i = pd.read_csv(out / "shock_merge" / "mu_I.csv")
    assert mu_i["weight"].tolist() == pytest.approx([0.09])
    assert (out / "shock_merge" / "glimm.csv").exists()
    fronts = pd.read_csv(out / "shock_merge" / "maximal_fronts.csv")
    assert set(fronts["role"]) == {"initial", "triple", "open_end", "merge_in"}
    exceptional = json.loads((out / "shock_merge" / "exceptional_times.json").read_text(encoding="utf-8"))
    assert len(exceptional) == 1


def test_single_scenario_commands_need_a_choice(suite: Path):
    assert main(["measures", "--config", str(suite)]) == EXIT_CONFIG


def test_characteristics_are_written(suite: Path, tmp_path: Path):
    code = main(["characteristics", "--config", str(suite), "--scenario", "shock", "--out", str(tmp_path / "out")])

    assert code == EXIT_OK
    frame = pd.read_csv(tmp_path / "out" / "shock" / "characteristic_0.csv")
    assert frame["x"].tolist() == pytest.approx([-0.5, 0.5, 1.0])


def test_check_writes_a_passing_report(suite: Path, tmp_path: Path):
    out = tmp_path / "report"

    code = main(["check", "--config", str(suite), "--scenario", "shock_merge", "--out", str(out)])

    assert code == EXIT_OK
    (report,) = out.glob("evaluation__*.json")
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["summary"]["passed"] == 1
    assert data["command"] == "check"


def test_check_fails_on_a_violated_check(tmp_path: Path):
    # fan atoms fill their windows exactly, so a constant below one is violated
    path = write_suite(tmp_path / "tight.json", [{**RAREFACTION, "checks": ["positive_decay"]}], calibration={"positive_decay": 0.5})

    code = main(["check", "--config", str(path), "--out", str(tmp_path / "report")])

    assert code == EXIT_FAILED


def test_bad_config_exits_with_two(tmp_path: Path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 1, "scenarios": [{**RAREFACTION, "colour": "red"}]}), encoding="utf-8")

    assert main(["run", "--config", str(path)]) == EXIT_CONFIG
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_oracle_command_exports_the_reference(tmp_path: Path):
    path = write_suite(tmp_path / "oracle.json", [{**RAREFACTION, "oracle": {"nus": [0.2, 0.1], "t": 1.0, "grid": 256}}])

    code = main(["oracle", "--config", str(path), "--no-study", "--out", str(tmp_path / "out")])

    assert code == EXIT_OK
    frame = pd.read_csv(tmp_path / "out" / "rarefaction" / "oracle.csv")
    assert len(frame) == 256

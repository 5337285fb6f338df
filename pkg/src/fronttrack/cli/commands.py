"""
Subcommand handlers. Each returns the process exit code: 0 success, 1 check violation or engine
alarm. Configuration problems are raised as ``ConfigError`` and mapped to 2 by the entry point.
"""

from __future__ import annotations

import argparse
import json
import logging
import time
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List

import numpy as np
import pandas as pd

from fronttrack.analysis.characteristics import characteristic
from fronttrack.analysis.exceptional import exceptional_times
from fronttrack.config.scenario import OracleOptions, ScenarioConfig, Suite, load_suite, write_calibration
from fronttrack.engine.initial import RiemannDatum
from fronttrack.engine.io import export_run, load_run
from fronttrack.engine.records import RunLog
from fronttrack.errors import BudgetExceededError, ConfigError, FrontCountExplosionError
from fronttrack.evaluation.calibration import calibrate
from fronttrack.evaluation.checks import ScenarioReport, run_checks, run_scenario
from fronttrack.evaluation.evaluation import run_suite, to_json, write_evaluation_report
from fronttrack.evaluation.oracle import convergence_study, oracle_solution
from fronttrack.genealogy.paths import extract_maximal_fronts
from fronttrack.measures.balance import icj_measure, jump_balance_measure, wave_balance_measure
from fronttrack.measures.glimm import glimm_series
from fronttrack.measures.interaction import interaction_measures
from fronttrack.riemann.solver import solve_riemann

logger = logging.getLogger(__name__)

DEFAULT_OUT = "out"


def _scenarios(args: argparse.Namespace) -> tuple[Suite, List[ScenarioConfig]]:
    suite = load_suite(args.config)
    return suite, suite.select(args.scenario)


def _single(args: argparse.Namespace, what: str) -> tuple[Suite, ScenarioConfig]:
    suite, chosen = _scenarios(args)
    if len(chosen) != 1:
        raise ConfigError(f"{what} needs one scenario; pick one with --scenario from {suite.names()}")
    return suite, chosen[0]


def _out_dir(args: argparse.Namespace, config: ScenarioConfig) -> Path:
    return Path(args.out or config.output_dir or DEFAULT_OUT) / config.name


def _log_for(args: argparse.Namespace, config: ScenarioConfig) -> RunLog:
    log_dir = getattr(args, "log_dir", None)
    if log_dir is not None:
        return load_run(log_dir)
    return run_scenario(config)


# --- riemann ---


def _fan_frame(fan) -> pd.DataFrame:
    rows = []
    for wave in fan.waves:
        for k, jump in enumerate(wave.jumps()):
            rows.append(
                {
                    "family": wave.family,
                    "kind": wave.kind.value,
                    "jump": k,
                    "strength": jump.strength,
                    "speed": jump.speed,
                    "left": json.dumps([float(v) for v in jump.left_state]),
                    "right": json.dumps([float(v) for v in jump.right_state]),
                }
            )
    return pd.DataFrame(rows, columns=["family", "kind", "jump", "strength", "speed", "left", "right"])


def cmd_riemann(args: argparse.Namespace) -> int:
    _, chosen = _scenarios(args)
    for config in chosen:
        model = config.build_model()
        datum = config.build_datum()
        if not isinstance(datum, RiemannDatum):
            raise ConfigError(f"scenario {config.name!r} does not have a Riemann datum")
        fan = solve_riemann(model, datum.left, datum.right, nu=config.build_params().nu)
        frame = _fan_frame(fan)
        print(f"# {config.name}: {model.name}, strengths {np.array2string(fan.strengths, precision=12)}")
        if "strengths" in config.datum:
            error = float(np.max(np.abs(fan.strengths - np.asarray(config.datum["strengths"], dtype=float))))
            print(f"# strength recovery error {error:.3e}")
        print(frame.to_string(index=False))
        if args.out is not None or config.output_dir is not None:
            out = _out_dir(args, config)
            out.mkdir(parents=True, exist_ok=True)
            frame.to_csv(out / "riemann.csv", index=False)
    return 0


# --- run ---


def cmd_run(args: argparse.Namespace) -> int:
    _, chosen = _scenarios(args)
    status = 0
    for config in chosen:
        out = _out_dir(args, config)
        try:
            log = run_scenario(config)
        except (BudgetExceededError, FrontCountExplosionError) as exc:
            logger.error("%s: %s", config.name, exc)
            if exc.log is not None:
                export_run(exc.log, out)
            status = 1
            continue
        export_run(log, out)
        print(f"{config.name}: {len(log.events)} events, {len(log.fronts)} fronts, NP peak {log.np_peak:.3e} -> {out}")
    return status


# --- measures ---


def cmd_measures(args: argparse.Namespace) -> int:
    _, config = _single(args, "measures")
    log = _log_for(args, config)
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    mu_i, mu_ic = interaction_measures(log)
    frames: Dict[str, pd.DataFrame] = {"mu_I": mu_i.to_frame(), "mu_IC": mu_ic.to_frame()}
    for family in range(1, log.model.n_eqs + 1):
        balance, rho = wave_balance_measure(log, family)
        frames[f"mu_{family}"] = balance.to_frame()
        frames[f"rho_{family}"] = rho.to_frame()
        if not log.model.is_genuinely_nonlinear(family):
            continue
        for level, (eps0, eps1) in enumerate(config.ladder, start=1):
            frames[f"mu_{family}_jump_{level}"] = jump_balance_measure(log, family, eps0, eps1).to_frame()
            frames[f"mu_ICJ_{family}_{level}"] = icj_measure(log, family, eps0, eps1).to_frame()

    for name, frame in frames.items():
        frame.to_csv(out / f"{name}.csv", index=False)
        print(f"{name}: {len(frame)} atoms, total {frame['weight'].sum():.6g}")
    glimm_series(log).to_frame().to_csv(out / "glimm.csv", index=False)
    return 0


# --- fronts ---


def cmd_fronts(args: argparse.Namespace) -> int:
    _, config = _single(args, "fronts")
    log = _log_for(args, config)
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    polylines = []
    for family in range(1, log.model.n_eqs + 1):
        if not log.model.is_genuinely_nonlinear(family):
            continue
        for level, (eps0, eps1) in enumerate(config.ladder, start=1):
            paths = extract_maximal_fronts(log, family, eps0, eps1)
            terminating = sum(1 for p in paths if p.terminates)
            print(f"family {family}, ({eps0:g}, {eps1:g}): {len(paths)} maximal fronts, {terminating} terminating")
            for path in paths:
                polylines.append(path.to_frame().assign(level=level))
    frame = pd.concat(polylines, ignore_index=True) if polylines else pd.DataFrame(
        columns=["path_id", "family", "t", "x", "sigma", "role", "level"]
    )
    frame.to_csv(out / "maximal_fronts.csv", index=False)

    found = exceptional_times(log, config.ladder)
    (out / "exceptional_times.json").write_text(to_json([e.to_dict() for e in found]), encoding="utf-8")
    print(f"exceptional times: {[e.t for e in found]}")
    return 0


# --- characteristics ---


def cmd_characteristics(args: argparse.Namespace) -> int:
    _, config = _single(args, "characteristics")
    if not config.characteristics:
        raise ConfigError(f"scenario {config.name!r} has no characteristics to trace")
    log = run_scenario(config)
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)
    for k, seed in enumerate(config.characteristics):
        path = characteristic(log, seed.t0, seed.x0, seed.family, seed.tau, seed.selection)
        path.to_frame().to_csv(out / f"characteristic_{k}.csv", index=False)
        print(
            f"{seed.selection.value} {seed.family}-characteristic from ({seed.t0:g}, {seed.x0:g}): "
            f"x({path.t_end:g}) = {path.positions[-1]:.12g}, {len(path.riding)} segments"
        )
    return 0


# --- check / report ---


def cmd_check(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    suite, chosen = _scenarios(args)
    if args.log_dir is not None and len(chosen) != 1:
        raise ConfigError("--log needs a single scenario; pick one with --scenario")

    reports: List[ScenarioReport] = []
    for config in chosen:
        t0 = time.perf_counter()
        log = _log_for(args, config)
        results = run_checks(log, config, suite.calibration)
        reports.append(ScenarioReport(config.name, results, time.perf_counter() - t0, len(log.events), len(log.fronts)))

    out = Path(args.out or chosen[0].output_dir or DEFAULT_OUT)
    path = write_evaluation_report(reports, out, args, time.perf_counter() - start)
    for report in reports:
        print(f"{report.name}: {'ok' if report.passed else 'FAILED ' + ', '.join(report.failed())}")
    print(f"report: {path}")
    return 0 if all(r.passed for r in reports) else 1


def cmd_report(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    suite, chosen = _scenarios(args)
    reports = run_suite(chosen, suite.calibration, jobs=args.jobs)
    path = write_evaluation_report(reports, Path(args.out or DEFAULT_OUT), args, time.perf_counter() - start)
    failed = [r.name for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} scenarios passed; report: {path}")
    return 1 if failed else 0


# --- oracle ---


def cmd_oracle(args: argparse.Namespace) -> int:
    _, chosen = _scenarios(args)
    status = 0
    for config in chosen:
        model = config.build_model()
        datum = config.build_datum()
        options = config.oracle if config.oracle is not None else OracleOptions()
        solution = oracle_solution(model, datum, options.t, options.grid)
        out = _out_dir(args, config)
        out.mkdir(parents=True, exist_ok=True)
        pd.DataFrame({"x": solution.x, "u": solution.u}).to_csv(out / "oracle.csv", index=False)
        print(f"{config.name}: shocks at t={options.t:g}: {[round(x, 6) for x, _ in solution.shocks()]}")
        if not args.study:
            continue
        params = [config.build_params(nu) for nu in options.nus]
        params = [p if p.horizon >= options.t else replace(p, horizon=options.t) for p in params]
        report = convergence_study(model, datum, params, options.t, options.grid, options.min_order)
        (out / "oracle_convergence.json").write_text(to_json(report.to_dict()), encoding="utf-8")
        print(f"{config.name}: L1 errors {['%.3e' % e for e in report.errors]}, order {report.order:.3f}")
        if not report.passed:
            status = 1
    return status


# --- calibrate ---


def cmd_calibrate(args: argparse.Namespace) -> int:
    suite, chosen = _scenarios(args)
    reports = run_suite(chosen, suite.calibration, jobs=args.jobs)
    result = calibrate(reports, suite.calibration)
    out = Path(args.out or DEFAULT_OUT)
    out.mkdir(parents=True, exist_ok=True)
    (out / "calibration.json").write_text(to_json(result.to_dict()), encoding="utf-8")
    for name, value in sorted(result.constants.items()):
        print(f"{name}: {value:.6g}")
    if args.freeze:
        write_calibration(args.config, result.constants, result.sources)
        print(f"froze constants into {args.config}")
    return 0


COMMAND_HANDLERS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "riemann": cmd_riemann,
    "run": cmd_run,
    "measures": cmd_measures,
    "fronts": cmd_fronts,
    "characteristics": cmd_characteristics,
    "check": cmd_check,
    "oracle": cmd_oracle,
    "report": cmd_report,
    "calibrate": cmd_calibrate,
}


def dispatch(args: argparse.Namespace) -> int:
    return COMMAND_HANDLERS[args.command](args)

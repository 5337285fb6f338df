"""
Consolidated invariant checks over one scenario run.

Each check returns a :class:`CheckResult`; ``ratios`` carries the observed left-hand side over
the constant-free right-hand side for every inequality with a calibrated constant, which is
what the calibration sweep freezes.
"""

from __future__ import annotations

import logging
import math
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from fronttrack.analysis.decay import check_cont_decay, check_positive_decay
from fronttrack.analysis.exceptional import exceptional_times
from fronttrack.analysis.regions import characteristic_region, region_balance_check, region_union
from fronttrack.analysis.wave_measure import wave_measure_at, wave_measure_before
from fronttrack.config.scenario import DEFAULT_CALIBRATION, IntervalUnion, OracleOptions, ScenarioConfig
from fronttrack.engine.initial import sample_initial_datum
from fronttrack.engine.io import export_run, load_run
from fronttrack.engine.queries import fronts_at, positions_at, replay
from fronttrack.engine.records import INITIAL_NODE, RunLog
from fronttrack.engine.residual import rh_defects
from fronttrack.engine.tracking import run
from fronttrack.errors import FrontTrackError, ReplayError
from fronttrack.evaluation.oracle import convergence_study, oracle_solution, refinement_shift
from fronttrack.genealogy.paths import extract_maximal_fronts, jump_set, ladder_monotonicity
from fronttrack.measures.balance import JUMP_CASES, jump_balance_measure, wave_balance_measure
from fronttrack.measures.glimm import glimm_series
from fronttrack.measures.interaction import interaction_measures
from fronttrack.model.averaging import lax_margins
from fronttrack.riemann.waves import WaveKind

logger = logging.getLogger(__name__)

LAX_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-12
EVENT_WINDOW = 1e-9
DECAY_TIMES = 4


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    ratios: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "passed": self.passed, **self.details}
        if self.ratios:
            out["ratios"] = dict(self.ratios)
        return out


@dataclass
class ScenarioReport:
    name: str
    checks: List[CheckResult]
    runtime: float
    events: int
    fronts: int
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "scenario": self.name,
            "passed": self.passed,
            "runtime": self.runtime,
            "events": self.events,
            "fronts": self.fronts,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def run_scenario(config: ScenarioConfig, nu: Optional[float] = None) -> RunLog:
    model = config.build_model()
    params = config.build_params(nu)
    initial = sample_initial_datum(model, config.build_datum(), params.nu, params.tv_guard)
    return run(model, params, initial)


def _gn_families(log: RunLog) -> List[int]:
    return [i for i in range(1, log.model.n_eqs + 1) if log.model.is_genuinely_nonlinear(i)]


def _ratio(lhs: float, base: float) -> float:
    if base > 0.0:
        return max(lhs, 0.0) / base
    return 0.0 if lhs <= 0.0 else math.inf


def _merge_ratio(ratios: Dict[str, float], name: str, value: float) -> None:
    ratios[name] = max(ratios.get(name, 0.0), value)


# --- run-level checks ---


def check_replay(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """Events re-apply cleanly and an export/import/export cycle is byte-identical."""
    try:
        slab_count = sum(1 for _ in replay(log))
    except ReplayError as exc:
        return CheckResult("replay", False, {"error": str(exc)})
    with tempfile.TemporaryDirectory() as tmp:
        first = export_run(log, Path(tmp) / "a")
        second = export_run(load_run(Path(tmp) / "a"), Path(tmp) / "b")
        differing = sorted(k for k in first if first[k].read_bytes() != second[k].read_bytes())
    return CheckResult("replay", not differing, {"slabs": slab_count, "differing_files": differing})


def check_lax(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    checked, violations = 0, []
    for fid in sorted(log.fronts):
        front = log.fronts[fid]
        if not front.is_physical or front.kind not in (WaveKind.SHOCK, WaveKind.CONTACT):
            continue
        checked += 1
        left, right = lax_margins(log.model, front.left_state, front.right_state, front.family, front.speed)
        allowed = -(LAX_TOLERANCE + abs(front.perturbation))
        if min(left, right) < allowed:
            violations.append({"front": fid, "margins": [left, right]})
    return CheckResult("lax", not violations, {"checked": checked, "violations": violations[:20], "violation_count": len(violations)})


def check_rh(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    defects = rh_defects(log)
    failing = [d for d in defects if not d.passed]
    worst = max((d.defect for d in defects if not d.informational), default=0.0)
    return CheckResult(
        "rh",
        not failing,
        {"checked": len(defects), "failing": [d.front_id for d in failing][:20], "max_defect": worst},
    )


def check_glimm(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    series = glimm_series(log)
    mu_i, _ = interaction_measures(log)
    interaction_total = mu_i.total_variation()
    bounded = interaction_total <= series.initial.upsilon + IDENTITY_TOLERANCE
    return CheckResult(
        "glimm",
        series.monotone and bounded,
        {
            "upsilon_0": series.initial.upsilon,
            "upsilon_T": series.snapshots[-1].upsilon,
            "violations": [list(v) for v in series.violations[:20]],
            "mu_I_total": interaction_total,
        },
    )


def _event_windows(log: RunLog) -> Dict[float, List[Tuple[float, float, List[int]]]]:
    """Events grouped by time, then by position windows; simultaneous events at one point share a window."""
    grouped: Dict[float, List[Tuple[float, float, List[int]]]] = {}
    for event in log.events:
        windows = grouped.setdefault(event.time, [])
        w = EVENT_WINDOW * max(1.0, abs(event.position))
        for lo, hi, ids in windows:
            if lo <= event.position <= hi:
                ids.append(event.id)
                break
        else:
            windows.append((event.position - w, event.position + w, [event.id]))
    return grouped


def check_identities(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """
    At every event, the jump of v_i equals the mu_i plus rho atoms there, and for genuinely
    nonlinear families the jump of v_i,jump equals the mu_i,jump atom (first ladder level).
    """
    eps0, eps1 = config.ladder[0]
    windows = _event_windows(log)
    worst = worst_jump = 0.0
    failures: List[Dict[str, Any]] = []
    for family in range(1, log.model.n_eqs + 1):
        mu_i, rho = wave_balance_measure(log, family)
        atoms = mu_i.by_event()
        np_atoms = rho.by_event()
        gn = log.model.is_genuinely_nonlinear(family)
        jumps = jump_set(log, family, eps0, eps1) if gn else None
        q_atoms = jump_balance_measure(log, family, eps0, eps1, jumps).by_event() if gn else {}
        for t, groups in windows.items():
            after = wave_measure_at(log, t, family, jumps)
            before = wave_measure_before(log, t, family, jumps)
            for lo, hi, ids in groups:
                delta = after.v.mass([(lo, hi)]) - before.v.mass([(lo, hi)])
                expected = math.fsum(atoms.get(i, 0.0) + np_atoms.get(i, 0.0) for i in ids)
                defect = abs(delta - expected)
                worst = max(worst, defect)
                if defect > IDENTITY_TOLERANCE * max(1.0, abs(expected)):
                    failures.append({"family": family, "events": ids, "defect": defect})
                if gn:
                    delta_jump = after.jump.mass([(lo, hi)]) - before.jump.mass([(lo, hi)])
                    expected_jump = math.fsum(q_atoms.get(i, 0.0) for i in ids)
                    jump_defect = abs(delta_jump - expected_jump)
                    worst_jump = max(worst_jump, jump_defect)
                    if jump_defect > IDENTITY_TOLERANCE * max(1.0, abs(expected_jump)):
                        failures.append({"family": family, "events": ids, "jump_defect": jump_defect})
    return CheckResult(
        "identities",
        not failures,
        {"max_defect": worst, "max_jump_defect": worst_jump, "failures": failures[:20], "failure_count": len(failures)},
    )


# --- region and decay checks ---


def _support(log: RunLog, t: float) -> Tuple[float, float]:
    positions = positions_at(fronts_at(log, t), t)
    if not positions.size:
        return -1.0, 1.0
    pad = max(0.5, 0.1 * float(positions[-1] - positions[0]))
    return float(positions[0]) - pad, float(positions[-1]) + pad


def _random_unions(log: RunLog, count: int, rng: np.random.Generator, max_parts: int = 1) -> List[IntervalUnion]:
    horizon = log.horizon
    out = []
    for _ in range(count):
        t0 = float(rng.uniform(0.0, 0.6 * horizon))
        tau = float(rng.uniform(0.1, 1.0) * (horizon - t0))
        lo, hi = _support(log, t0)
        cuts = np.sort(rng.uniform(lo, hi, size=2 * int(rng.integers(1, max_parts + 1))))
        intervals = tuple((float(a), float(b)) for a, b in cuts.reshape(-1, 2) if b > a)
        if intervals:
            out.append(IntervalUnion(t0, tau, intervals))
    return out


def check_regions(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """Balance on seeded random characteristic regions plus the configured interval unions."""
    eps0, eps1 = config.ladder[0]
    rng = np.random.default_rng(config.seed)
    wave_c = constants.get("wave_balance", DEFAULT_CALIBRATION["wave_balance"])
    cont_c = constants.get("region", DEFAULT_CALIBRATION["region"])
    ratios: Dict[str, float] = {}
    checked, identity_failures, inequality_failures = 0, [], []
    worst = 0.0
    unions = _random_unions(log, config.regions, rng) + list(config.interval_unions)
    for family in _gn_families(log):
        jumps = jump_set(log, family, eps0, eps1)
        for union in unions:
            if len(union.intervals) == 1:
                (a, b), = union.intervals
                regions = [characteristic_region(log, family, union.t0, union.tau, a, b)]
            else:
                regions = region_union(log, family, union.t0, union.tau, union.intervals)
            report = region_balance_check(log, family, regions, eps0, eps1, jumps, constant=wave_c, cont_constant=cont_c)
            checked += 1
            worst = max(worst, report.identity_defect, report.jump_identity_defect)
            if not report.identities_hold:
                identity_failures.append(report.to_dict())
            elif not report.passed:
                inequality_failures.append(report.to_dict())
            for ineq in report.inequalities:
                if ineq.name == "wave_balance":
                    _merge_ratio(ratios, "wave_balance", _ratio(ineq.lhs, ineq.rhs / wave_c))
                elif ineq.name == "cont_balance":
                    _merge_ratio(ratios, "region", _ratio(ineq.lhs, ineq.rhs / cont_c))
    return CheckResult(
        "regions",
        not identity_failures and not inequality_failures,
        {
            "checked": checked,
            "max_identity_defect": worst,
            "identity_failures": identity_failures[:5],
            "inequality_failures": inequality_failures[:5],
            "failure_count": len(identity_failures) + len(inequality_failures),
        },
        ratios,
    )


def check_jump_cases(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """Every event touching a jump set carries exactly one jump-balance atom with a known case."""
    problems: List[Dict[str, Any]] = []
    counts: Dict[str, int] = {case: 0 for case in JUMP_CASES}
    roles: Dict[str, int] = {}
    for family in _gn_families(log):
        for eps0, eps1 in config.ladder:
            jumps = jump_set(log, family, eps0, eps1)
            q = jump_balance_measure(log, family, eps0, eps1, jumps)
            touching = {
                e.id for e in log.events if any(fid in jumps for fid in (*e.incoming, *e.outgoing))
            }
            ids = [eid for eid in q.event_id.tolist() if eid != INITIAL_NODE]
            if len(ids) != len(set(ids)) or set(ids) != touching:
                problems.append({"family": family, "ladder": [eps0, eps1], "atoms": len(ids), "events": len(touching)})
            initial = sum(1 for fid in log.initial_ids if fid in jumps)
            initial_atoms = int(np.count_nonzero(q.event_id == INITIAL_NODE))
            if initial_atoms != initial:
                problems.append({"family": family, "ladder": [eps0, eps1], "initial_atoms": initial_atoms, "initial_fronts": initial})
            for kind in q.kind.tolist():
                if kind not in counts:
                    problems.append({"family": family, "unknown_case": kind})
                else:
                    counts[kind] += 1
            for path in jumps.paths:
                for node in path.nodes:
                    roles[node.role.value] = roles.get(node.role.value, 0) + 1
    return CheckResult("jump_cases", not problems, {"cases": counts, "node_roles": roles, "problems": problems[:20]})


def check_terminal(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """A maximal front that terminates lost at least eps1 - eps0, paid for by mu_IC along it."""
    constant = constants.get("terminal", DEFAULT_CALIBRATION["terminal"])
    _, mu_ic = interaction_measures(log)
    ratios: Dict[str, float] = {}
    checked, violations = 0, []
    for family in _gn_families(log):
        for eps0, eps1 in config.ladder:
            for path in extract_maximal_fronts(log, family, eps0, eps1):
                if not path.terminates:
                    continue
                checked += 1
                mass = mu_ic.restrict_events(path.event_ids()).total()
                lhs = eps1 - eps0
                _merge_ratio(ratios, "terminal", _ratio(lhs, mass))
                if lhs > constant * mass + IDENTITY_TOLERANCE:
                    violations.append({"family": family, "path": path.path_id, "ladder": [eps0, eps1], "mu_IC": mass})
    return CheckResult("terminal", not violations, {"checked": checked, "violations": violations[:20]}, ratios)


def _positive_windows(log: RunLog, t: float, family: int) -> List[List[Tuple[float, float]]]:
    """Windows (x_k, x_{k+1}] between neighbouring positive atoms, plus their hull."""
    positive = wave_measure_at(log, t, family).v.positive_part()
    xs = positive.x
    if xs.size < 2:
        return []
    nudge = EVENT_WINDOW * max(1.0, float(np.max(np.abs(xs))))
    sets = [[(float(a) + nudge, float(b))] for a, b in zip(xs[:-1], xs[1:])]
    sets.append([(float(xs[0]) + nudge, float(xs[-1]))])
    return sets


def check_positive_decay_all(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    constant = constants.get("positive_decay", DEFAULT_CALIBRATION["positive_decay"])
    ratios: Dict[str, float] = {}
    checked, violations = 0, []
    for family in _gn_families(log):
        for t in np.linspace(log.horizon / DECAY_TIMES, log.horizon, DECAY_TIMES).tolist():
            sets = _positive_windows(log, t, family)
            if not sets:
                continue
            for verdict in check_positive_decay(log, family, 0.0, t, sets, constant):
                checked += 1
                _merge_ratio(ratios, "positive_decay", _ratio(verdict.lhs, verdict.rhs / constant))
                if not verdict.passed:
                    violations.append(verdict.to_dict())
    return CheckResult("positive_decay", not violations, {"checked": checked, "violations": violations[:10]}, ratios)


def check_cont_decay_all(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    constant = constants.get("cont_decay", DEFAULT_CALIBRATION["cont_decay"])
    eps0, eps1 = config.ladder[0]
    rng = np.random.default_rng(config.seed + 1)
    unions = list(config.interval_unions) or _random_unions(log, config.decay_unions, rng, max_parts=3)
    ratios: Dict[str, float] = {}
    checked, violations, unexplained, case2 = 0, [], [], 0
    for family in _gn_families(log):
        jumps = jump_set(log, family, eps0, eps1)
        for union in unions:
            for report in check_cont_decay(log, family, union.t0, union.tau, [union.intervals], eps0, eps1, jumps, constant):
                checked += 1
                verdict = report.verdict
                _merge_ratio(ratios, "cont_decay", _ratio(verdict.lhs, verdict.rhs / constant))
                case2 += sum(1 for trace in report.traces if trace.case == 2)
                if not report.passed:
                    violations.append(report.to_dict())
                if report.unexplained_case_2:
                    unexplained.append({**report.to_dict(), "traces": report.unexplained_case_2})
    return CheckResult(
        "cont_decay",
        not violations and not unexplained,
        {
            "checked": checked,
            "case_2_traces": case2,
            "violations": violations[:10],
            "case_2_without_icj": unexplained[:10],
        },
        ratios,
    )


def check_exceptional(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    found = exceptional_times(log, config.ladder)
    return CheckResult("exceptional", True, {"times": [e.to_dict() for e in found]})


def check_ladder(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """Informational: segments a finer ladder level drops from the coarser one."""
    lost = {
        str(family): [{"level": k, "segments": ids[:20]} for k, ids in ladder_monotonicity(log, family, config.ladder)]
        for family in _gn_families(log)
    }
    return CheckResult("ladder", True, {"lost": lost, "nested": not any(lost.values())})


def check_oracle(log: RunLog, config: ScenarioConfig, constants: Mapping[str, float]) -> CheckResult:
    """Convergence to the Lax-Oleinik solution, Oleinik's bound, and grid self-consistency."""
    options = config.oracle if config.oracle is not None else OracleOptions()
    model = config.build_model()
    datum = config.build_datum()
    params = [config.build_params(nu) for nu in options.nus]
    params = [p if p.horizon >= options.t else replace(p, horizon=options.t) for p in params]
    report = convergence_study(model, datum, params, options.t, options.grid, options.min_order)
    solution = oracle_solution(model, datum, options.t, options.grid)
    shift, dx = refinement_shift(model, datum, options.t, options.grid)
    passed = report.passed and solution.satisfies_oleinik() and shift <= dx
    return CheckResult(
        "oracle",
        passed,
        {
            **report.to_dict(),
            "oleinik_ratio": solution.oleinik_ratio(),
            "shocks": [list(s) for s in solution.shocks()],
            "refinement_shift": shift,
            "grid_spacing": dx,
        },
    )


CheckFunction = Callable[[RunLog, ScenarioConfig, Mapping[str, float]], CheckResult]

CHECKS: Dict[str, CheckFunction] = {
    "replay": check_replay,
    "lax": check_lax,
    "rh": check_rh,
    "glimm": check_glimm,
    "identities": check_identities,
    "regions": check_regions,
    "jump_cases": check_jump_cases,
    "terminal": check_terminal,
    "positive_decay": check_positive_decay_all,
    "cont_decay": check_cont_decay_all,
    "exceptional": check_exceptional,
    "ladder": check_ladder,
    "oracle": check_oracle,
}


def run_checks(
    log: RunLog,
    config: ScenarioConfig,
    constants: Optional[Mapping[str, float]] = None,
    only: Optional[Sequence[str]] = None,
) -> List[CheckResult]:
    constants = {**DEFAULT_CALIBRATION, **(constants or {})}
    names = list(only) if only is not None else list(config.checks)
    results = []
    for name in names:
        if name not in CHECKS:
            raise KeyError(f"unknown check {name!r}")
        result = CHECKS[name](log, config, constants)
        results.append(result)
        if result.passed:
            logger.info("%s: %s passed", config.name, name)
        else:
            logger.warning("%s: %s FAILED", config.name, name)
    return results


def check_scenario(
    config: ScenarioConfig,
    constants: Optional[Mapping[str, float]] = None,
    log: Optional[RunLog] = None,
) -> ScenarioReport:
    """Run (unless a log is given) and check one scenario; engine alarms become a failed report."""
    start = time.perf_counter()
    try:
        log = log if log is not None else run_scenario(config)
    except FrontTrackError as exc:
        logger.error("%s: run failed: %s", config.name, exc)
        return ScenarioReport(config.name, [], time.perf_counter() - start, 0, 0, error=f"{type(exc).__name__}: {exc}")
    results = run_checks(log, config, constants)
    return ScenarioReport(config.name, results, time.perf_counter() - start, len(log.events), len(log.fronts))

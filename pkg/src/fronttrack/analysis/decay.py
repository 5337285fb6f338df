"""
Decay checks for the wave measures of a genuinely nonlinear family.

Positive waves: v_i+(t)(B) <= C {|B| / (t - s) + Q(s) - Q(t)}.
Continuous negative waves on intervals J at t0, grown by characteristics for a time tau:
-v_i,cont(t0)(J) <= C {|J| / tau + mu_ICJ(A) + eps_nu + eps1}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fronttrack.analysis.characteristics import characteristic_speed, states_around
from fronttrack.analysis.regions import CharRegion, region_events, region_union
from fronttrack.analysis.wave_measure import wave_measure_at
from fronttrack.engine.records import RunLog
from fronttrack.genealogy.paths import JumpSet, jump_set as build_jump_set
from fronttrack.measures.balance import icj_measure
from fronttrack.measures.glimm import glimm_series

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]
DEFAULT_POSITIVE_CONSTANT = 1.1
DEFAULT_CONT_CONSTANT = 4.0
DECAY_TOLERANCE = 1e-12


def union_length(intervals: Sequence[Interval]) -> float:
    """Lebesgue measure of a finite union of intervals."""
    total, reach = 0.0, -math.inf
    for a, b in sorted((float(a), float(b)) for a, b in intervals):
        if b <= reach:
            continue
        total += b - max(a, reach)
        reach = b
    return total


@dataclass(frozen=True)
class DecayVerdict:
    check: str
    family: int
    intervals: Tuple[Interval, ...]
    lhs: float
    rhs: float
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + DECAY_TOLERANCE * max(1.0, abs(self.rhs))

    def to_dict(self) -> Dict[str, object]:
        return {
            "check": self.check,
            "family": self.family,
            "intervals": [list(i) for i in self.intervals],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "passed": self.passed,
            **self.details,
        }


def check_positive_decay(
    log: RunLog,
    family: int,
    s: float,
    t: float,
    sets: Sequence[Sequence[Interval]],
    constant: float = DEFAULT_POSITIVE_CONSTANT,
) -> List[DecayVerdict]:
    """One verdict per interval union B, with B taken at time t."""
    if not 0.0 <= s < t <= log.horizon:
        raise ValueError(f"need 0 <= s < t <= {log.horizon:g}, got s={s:g}, t={t:g}")
    series = glimm_series(log)
    q_drop = series.at(s).Q - series.at(t).Q
    positive = wave_measure_at(log, t, family).v.positive_part()

    verdicts = []
    for intervals in sets:
        intervals = tuple((float(a), float(b)) for a, b in intervals)
        length = union_length(intervals)
        lhs = positive.mass(intervals)
        rhs = constant * (length / (t - s) + q_drop)
        verdict = DecayVerdict(
            "positive_decay", family, intervals, lhs, rhs, {"s": s, "t": t, "length": length, "q_drop": q_drop}
        )
        verdicts.append(verdict)
        if verdict.passed:
            logger.info("positive decay, family %d, B=%s: %.4g <= %.4g", family, intervals, lhs, rhs)
        else:
            logger.warning("positive decay violated, family %d, B=%s: %.4g > %.4g", family, intervals, lhs, rhs)
    return verdicts


@dataclass
class DecayCheckTrace:
    """
    Evolution of one interval along its characteristics.

    ``xi`` is the boundary correction (lambda_bar(a) - lambda(a-)) + (lambda(b+) - lambda_bar(b)),
    lambda_bar being the speed of the boundary itself. ``case`` is 1 when the length shrinks
    at a rate below case_split * v_cont(t0) throughout, 2 otherwise (``case_time`` is the
    first time it does not).
    """

    interval: Interval
    times: np.ndarray
    z: np.ndarray
    speed_a: np.ndarray
    speed_b: np.ndarray
    xi: np.ndarray
    v_cont: np.ndarray
    v_jump: np.ndarray
    collapse_time: Optional[float]
    case: int
    case_time: Optional[float]

    @property
    def compressive(self) -> bool:
        return bool(self.v_cont.size) and float(self.v_cont[0]) < -DECAY_TOLERANCE

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.times,
                "z": self.z,
                "speed_a": self.speed_a,
                "speed_b": self.speed_b,
                "xi": self.xi,
                "v_cont": self.v_cont,
                "v_jump": self.v_jump,
            }
        )


def _segment_speed(path, t: float) -> float:
    speeds = path.speeds()
    if speeds.size == 0:
        return 0.0
    k = int(np.searchsorted(path.times, t, side="right")) - 1
    return float(speeds[min(max(k, 0), speeds.size - 1)])


def decay_trace(log: RunLog, region: CharRegion, jumps: JumpSet) -> DecayCheckTrace:
    family = region.family
    times = region.breakpoints()
    event_times = log.event_times()
    window = event_times[(event_times >= region.t0) & (event_times <= region.t_end)]
    times = np.union1d(times, window)

    z, sa, sb, xi, vc, vj = [], [], [], [], [], []
    for t in times.tolist():
        a, b = region.a.at(t), region.b.at(t)
        speed_a, speed_b = _segment_speed(region.a, t), _segment_speed(region.b, t)
        u_a_minus, _ = states_around(log, t, a)
        _, u_b_plus = states_around(log, t, b)
        xi.append(
            (speed_a - characteristic_speed(log, u_a_minus, family))
            + (characteristic_speed(log, u_b_plus, family) - speed_b)
        )
        z.append(max(b - a, 0.0))
        sa.append(speed_a)
        sb.append(speed_b)
        section = region.section(t)
        measures = wave_measure_at(log, t, family, jumps)
        vc.append(measures.cont.mass([section]) if section is not None else 0.0)
        vj.append(measures.jump.mass([section]) if section is not None else 0.0)

    threshold = log.params.case_split * vc[0] if vc else 0.0
    case, case_time = 1, None
    for t, rate, length in zip(times.tolist(), np.subtract(sb, sa).tolist(), z):
        if length > 0.0 and rate >= threshold:
            case, case_time = 2, t
            break

    return DecayCheckTrace(
        interval=(float(region.a.positions[0]), float(region.b.positions[0])),
        times=times,
        z=np.asarray(z),
        speed_a=np.asarray(sa),
        speed_b=np.asarray(sb),
        xi=np.asarray(xi),
        v_cont=np.asarray(vc),
        v_jump=np.asarray(vj),
        collapse_time=region.collapse_time(),
        case=case,
        case_time=case_time,
    )


@dataclass
class ContDecayReport:
    """
    ``region_icj`` holds the mu_ICJ mass of each traced region. A compressive trace that takes
    the second branch without any such mass contradicts the case split and is listed by
    ``unexplained_case_2``.
    """

    verdict: DecayVerdict
    traces: List[DecayCheckTrace]
    region_icj: List[float] = field(default_factory=list)

    @property
    def unexplained_case_2(self) -> List[int]:
        return [
            k
            for k, (trace, mass) in enumerate(zip(self.traces, self.region_icj))
            if trace.case == 2 and trace.compressive and mass <= DECAY_TOLERANCE
        ]

    @property
    def passed(self) -> bool:
        return self.verdict.passed

    def to_dict(self) -> Dict[str, object]:
        out = self.verdict.to_dict()
        out["cases"] = [t.case for t in self.traces]
        out["collapse_times"] = [t.collapse_time for t in self.traces]
        out["region_icj"] = list(self.region_icj)
        return out


def check_cont_decay(
    log: RunLog,
    family: int,
    t0: float,
    tau: float,
    interval_unions: Sequence[Sequence[Interval]],
    eps0: float,
    eps1: float,
    jumps: Optional[JumpSet] = None,
    constant: float = DEFAULT_CONT_CONSTANT,
) -> List[ContDecayReport]:
    """One report per union J of disjoint closed intervals at time t0."""
    if t0 < 0.0 or tau <= 0.0 or t0 + tau > log.horizon * (1.0 + 1e-12):
        raise ValueError(f"[{t0:g}, {t0 + tau:g}] is not inside [0, {log.horizon:g}]")
    jumps = jumps if jumps is not None else build_jump_set(log, family, eps0, eps1)
    icj = icj_measure(log, family, eps0, eps1, jumps)
    cont = wave_measure_at(log, t0, family, jumps).cont
    eps_nu = float(log.params.np_budget)

    reports = []
    for intervals in interval_unions:
        intervals = tuple((float(a), float(b)) for a, b in intervals)
        regions = region_union(log, family, t0, tau, intervals)
        per_region = [{e.id for e in region_events(log, region)} for region in regions]
        event_ids = set().union(*per_region)
        icj_mass = icj.restrict_events(event_ids).total()
        length = union_length(intervals)
        lhs = -cont.mass(intervals)
        rhs = constant * (length / tau + icj_mass + eps_nu + eps1)
        verdict = DecayVerdict(
            "cont_decay",
            family,
            intervals,
            lhs,
            rhs,
            {"t0": t0, "tau": tau, "length": length, "mu_icj": icj_mass, "eps_nu": eps_nu, "eps1": eps1},
        )
        traces = [decay_trace(log, region, jumps) for region in regions]
        region_icj = [icj.restrict_events(ids).total() for ids in per_region]
        reports.append(ContDecayReport(verdict, traces, region_icj))
        if verdict.passed:
            logger.info("continuous decay, family %d, J=%s: %.4g <= %.4g", family, intervals, lhs, rhs)
        else:
            logger.warning("continuous decay violated, family %d, J=%s: %.4g > %.4g", family, intervals, lhs, rhs)
    return reports

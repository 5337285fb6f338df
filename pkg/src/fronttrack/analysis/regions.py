"""
Regions bounded by two generalized characteristics and the wave balance on them.

Inside such a region the i-wave content changes only at interaction points, by the atoms of the
wave balance measure; everything else is flux through the two boundaries. The flux is computed
front by front: between consecutive grid times (events and boundary breakpoints) every front and
both boundaries move on straight lines, so membership of a front can only change at grid times.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from fronttrack.analysis.characteristics import (
    POSITION_TOLERANCE,
    CharacteristicPath,
    Selection,
    admissible_speed,
    characteristic,
)
from fronttrack.engine.queries import fronts_at
from fronttrack.engine.records import Front, InteractionEvent, RunLog
from fronttrack.errors import BoundaryNotCharacteristicError
from fronttrack.genealogy.paths import JumpSet, jump_set as build_jump_set
from fronttrack.measures.atomic import AtomicSpaceTimeMeasure
from fronttrack.measures.balance import jump_balance_measure, wave_atom, wave_balance_measure
from fronttrack.measures.interaction import interaction_measures
from fronttrack.riemann.waves import WaveKind

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-12
DEFAULT_REGION_CONSTANT = 4.0
# segments shorter than this carry no reliable speed
MIN_SEGMENT = 1e-9

FLUX_CASES = (
    "rarefaction_exits",
    "shock_enters",
    "outer_shocks_interact",
    "outer_shock_meets_inner_shock",
    "outer_shock_meets_rarefaction_exit",
    "outer_shock_meets_rarefaction_no_exit",
    "outer_rarefaction_meets_inner_shock_exit",
    "outer_rarefaction_meets_inner_shock_no_exit",
    "outer_pair_no_exit",
    "outer_pair_exit",
)
JUMP_FLUX_CASES = ("jump_shock_enters", "jump_shocks_interact", "jump_exit", "otherwise")


@dataclass(frozen=True)
class CharRegion:
    """{(t, x): t0 < t <= t0 + tau, a(t) <= x <= b(t)} with a, b characteristics of ``family``."""

    family: int
    t0: float
    tau: float
    a: CharacteristicPath
    b: CharacteristicPath

    @property
    def t_end(self) -> float:
        return self.t0 + self.tau

    def section(self, t: float) -> Optional[Tuple[float, float]]:
        lo, hi = self.a.at(t), self.b.at(t)
        if lo > hi + POSITION_TOLERANCE * max(1.0, abs(hi)):
            return None
        return lo, max(lo, hi)

    def length(self, t: float) -> float:
        section = self.section(t)
        return 0.0 if section is None else section[1] - section[0]

    def breakpoints(self) -> np.ndarray:
        return np.union1d(self.a.times, self.b.times)

    def collapse_time(self) -> Optional[float]:
        for t in self.breakpoints():
            if self.length(float(t)) <= POSITION_TOLERANCE * max(1.0, abs(self.a.at(float(t)))):
                return float(t)
        return None

    def contains(self, t: float, x: float) -> bool:
        section = self.section(t)
        if section is None:
            return False
        tol = POSITION_TOLERANCE * max(1.0, abs(x))
        return section[0] - tol <= x <= section[1] + tol


Regions = Union[CharRegion, Sequence[CharRegion]]


def characteristic_region(
    log: RunLog,
    family: int,
    t0: float,
    tau: float,
    a0: float,
    b0: float,
    selection: Selection = Selection.MINIMAL,
) -> CharRegion:
    if a0 > b0:
        raise ValueError(f"interval [{a0:g}, {b0:g}] is empty")
    a = characteristic(log, t0, a0, family, tau, selection)
    b = characteristic(log, t0, b0, family, tau, selection)
    return CharRegion(family, t0, tau, a, b)


def region_union(
    log: RunLog,
    family: int,
    t0: float,
    tau: float,
    intervals: Iterable[Tuple[float, float]],
    selection: Selection = Selection.MINIMAL,
) -> List[CharRegion]:
    """Regions grown from disjoint closed intervals at time t0."""
    ordered = sorted((float(a), float(b)) for a, b in intervals)
    for (a1, b1), (a2, b2) in zip(ordered[:-1], ordered[1:]):
        if a2 <= b1:
            raise ValueError(f"intervals [{a1:g}, {b1:g}] and [{a2:g}, {b2:g}] overlap")
    return [characteristic_region(log, family, t0, tau, a, b, selection) for a, b in ordered]


def _as_list(regions: Regions) -> List[CharRegion]:
    return [regions] if isinstance(regions, CharRegion) else list(regions)


def check_boundaries(log: RunLog, region: CharRegion) -> None:
    """Raise unless both boundaries move with an admissible characteristic speed on every segment."""
    for side, path in (("a", region.a), ("b", region.b)):
        if path.family != region.family:
            raise BoundaryNotCharacteristicError(f"boundary {side} follows family {path.family}, not {region.family}")
        for t, x, speed, dt in zip(path.times[:-1], path.positions[:-1], path.speeds(), np.diff(path.times)):
            if dt <= MIN_SEGMENT * max(1.0, region.t_end):
                continue
            if not admissible_speed(log, float(t), float(x), region.family, float(speed)):
                raise BoundaryNotCharacteristicError(
                    f"boundary {side} moves with speed {speed:g} at ({t:g}, {x:g}), not a {region.family}-characteristic speed"
                )


# --- flux ledger ---


@dataclass(frozen=True)
class FluxAtom:
    t: float
    x: float
    weight: float
    weight_jump: float
    weight_np: float
    case: str
    jump_case: str
    event_id: Optional[int]
    entering: Tuple[int, ...]
    exiting: Tuple[int, ...]

    @property
    def weight_cont(self) -> float:
        return self.weight - self.weight_jump


@dataclass
class FluxLedger:
    family: int
    atoms: List[FluxAtom] = field(default_factory=list)

    def total(self) -> float:
        return math.fsum(a.weight for a in self.atoms)

    def jump_total(self) -> float:
        return math.fsum(a.weight_jump for a in self.atoms)

    def cont_total(self) -> float:
        return math.fsum(a.weight_cont for a in self.atoms)

    def np_total(self) -> float:
        return math.fsum(a.weight_np for a in self.atoms)

    def positive_atoms(self) -> List[FluxAtom]:
        return [a for a in self.atoms if a.weight > 0.0]

    def extend(self, other: "FluxLedger") -> None:
        self.atoms.extend(other.atoms)

    def to_frame(self) -> pd.DataFrame:
        columns = ["t", "x", "weight", "weight_jump", "weight_cont", "weight_np", "case", "jump_case", "event_id"]
        rows = [
            [a.t, a.x, a.weight, a.weight_jump, a.weight_cont, a.weight_np, a.case, a.jump_case, a.event_id]
            for a in self.atoms
        ]
        return pd.DataFrame(rows, columns=columns)


def _is_family(front: Front, family: int) -> bool:
    return front.is_physical and front.family == family


def _shock_like(front: Front) -> bool:
    return front.kind in (WaveKind.SHOCK, WaveKind.CONTACT)


def _flux_case(log: RunLog, family: int, event: Optional[InteractionEvent], entering: List[Front], exiting: List[Front]) -> str:
    ent = [f for f in entering if _is_family(f, family)]
    ext = [f for f in exiting if _is_family(f, family)]
    rar_exit = any(f.kind is WaveKind.RAREFACTION_FAN for f in ext)
    ent_shocks = [f for f in ent if _shock_like(f)]
    ent_rars = [f for f in ent if f.kind is WaveKind.RAREFACTION_FAN]
    if not ent and not ext:
        return "non_physical" if any(not f.is_physical for f in entering + exiting) else "other_family"
    if not ent:
        return "rarefaction_exits" if rar_exit and not any(_shock_like(f) for f in ext) else "other"
    inner = []
    if event is not None:
        entering_ids = {f.id for f in entering}
        inner = [log.fronts[fid] for fid in event.incoming if fid not in entering_ids and _is_family(log.fronts[fid], family)]
    suffix = "exit" if rar_exit else "no_exit"
    if len(ent_shocks) == 2:
        return "outer_shocks_interact"
    if len(ent_shocks) == 1 and len(ent_rars) == 1:
        return f"outer_pair_{suffix}"
    if len(ent_shocks) == 1:
        if inner and _shock_like(inner[0]):
            return "outer_shock_meets_inner_shock"
        if inner:
            return f"outer_shock_meets_rarefaction_{suffix}"
        return "shock_enters"
    if len(ent_rars) == 1 and inner and _shock_like(inner[0]):
        return f"outer_rarefaction_meets_inner_shock_{suffix}"
    return "other"


def _jump_flux_case(jumps: JumpSet, entering: List[Front], exiting: List[Front]) -> str:
    n_in = sum(1 for f in entering if f.id in jumps)
    n_out = sum(1 for f in exiting if f.id in jumps)
    if n_out:
        return "jump_exit"
    if n_in == 2:
        return "jump_shocks_interact"
    if n_in == 1:
        return "jump_shock_enters"
    return "otherwise"


class _Bookkeeper:
    """Accumulates membership changes of fronts for one region, grouped by boundary point."""

    def __init__(self, log: RunLog, region: CharRegion, jumps: JumpSet) -> None:
        self.log = log
        self.region = region
        self.family = region.family
        self.jumps = jumps
        self.groups: Dict[Tuple, Dict] = {}

    def inside(self, front: Front, t: float) -> bool:
        return self.region.contains(t, front.position(t))

    def _key(self, front: Front, t: float) -> Tuple:
        if front.death_t == t and front.child_event is not None:
            return ("event", front.child_event)
        if front.birth_t == t and front.parent_event is not None:
            return ("event", front.parent_event)
        return ("front", front.id, t)

    def _group(self, key: Tuple, t: float, x: float) -> Dict:
        return self.groups.setdefault(key, {"t": t, "x": x, "entering": [], "exiting": [], "extra": [0.0, 0.0, 0.0]})

    def change(self, before: Set[int], after: Set[int], t: float) -> None:
        for fid in sorted(after - before):
            front = self.log.fronts[fid]
            self._group(self._key(front, t), t, front.position(t))["entering"].append(front)
        for fid in sorted(before - after):
            front = self.log.fronts[fid]
            self._group(self._key(front, t), t, front.position(t))["exiting"].append(front)

    def weights(self, front: Front) -> Tuple[float, float, float]:
        if front.is_physical:
            phys = front.strength if front.family == self.family else 0.0
            return phys, (front.strength if front.id in self.jumps else 0.0), 0.0
        return 0.0, 0.0, wave_atom(self.log, front, self.family)

    def event_residual(self, event: InteractionEvent, before: Set[int], after: Set[int], in_region: bool) -> None:
        """Flux left over at an event whose fronts disagree with the event point about membership."""
        residual = [0.0, 0.0, 0.0]
        for fid in event.outgoing:
            w = self.weights(self.log.fronts[fid])
            sign = float(fid in after) - float(in_region)
            residual = [r + sign * wi for r, wi in zip(residual, w)]
        for fid in event.incoming:
            w = self.weights(self.log.fronts[fid])
            sign = float(in_region) - float(fid in before)
            residual = [r + sign * wi for r, wi in zip(residual, w)]
        if any(residual):
            group = self._group(("event", event.id), event.time, event.position)
            group["extra"] = [g + r for g, r in zip(group["extra"], residual)]

    def ledger(self) -> FluxLedger:
        out = FluxLedger(self.family)
        for key, group in sorted(self.groups.items(), key=lambda kv: (kv[1]["t"], kv[1]["x"])):
            entering, exiting = group["entering"], group["exiting"]
            totals = [0.0, 0.0, 0.0]
            for f in entering:
                totals = [s + w for s, w in zip(totals, self.weights(f))]
            for f in exiting:
                totals = [s - w for s, w in zip(totals, self.weights(f))]
            totals = [s + e for s, e in zip(totals, group["extra"])]
            if not any(totals) and not any(_is_family(f, self.family) for f in entering + exiting):
                continue
            event = self.log.events[key[1]] if key[0] == "event" else None
            out.atoms.append(
                FluxAtom(
                    t=group["t"],
                    x=group["x"],
                    weight=totals[0],
                    weight_jump=totals[1],
                    weight_np=totals[2],
                    case=_flux_case(self.log, self.family, event, entering, exiting),
                    jump_case=_jump_flux_case(self.jumps, entering, exiting),
                    event_id=None if event is None else event.id,
                    entering=tuple(f.id for f in entering),
                    exiting=tuple(f.id for f in exiting),
                )
            )
        return out


def _grid(log: RunLog, region: CharRegion) -> np.ndarray:
    times = log.event_times()
    window = times[(times > region.t0) & (times <= region.t_end)]
    bps = region.breakpoints()
    bps = bps[(bps >= region.t0) & (bps <= region.t_end)]
    return np.union1d(np.union1d(window, bps), [region.t0, region.t_end])


def region_events(log: RunLog, region: CharRegion) -> List[InteractionEvent]:
    return [e for e in log.events if region.t0 < e.time <= region.t_end and region.contains(e.time, e.position)]


def _single_flux(log: RunLog, region: CharRegion, jumps: JumpSet) -> FluxLedger:
    book = _Bookkeeper(log, region, jumps)
    grid = _grid(log, region)
    members = {f.id for f in fronts_at(log, region.t0) if book.inside(f, region.t0)}
    by_time: Dict[float, List[InteractionEvent]] = {}
    for event in log.events:
        if region.t0 < event.time <= region.t_end:
            by_time.setdefault(event.time, []).append(event)

    for g0, g1 in zip(grid[:-1], grid[1:]):
        g0, g1 = float(g0), float(g1)
        alive = fronts_at(log, g0)
        mid = 0.5 * (g0 + g1)
        inner = {f.id for f in alive if book.inside(f, mid)}
        book.change(members, inner, g0)
        arriving = {f.id for f in alive if book.inside(f, g1)}
        book.change(inner, arriving, g1)
        after = {f.id for f in fronts_at(log, g1) if book.inside(f, g1)}
        for event in by_time.get(g1, []):
            book.event_residual(event, arriving, after, region.contains(event.time, event.position))
        members = after
    return book.ledger()


def boundary_flux(
    log: RunLog,
    regions: Regions,
    family: int,
    eps0: float,
    eps1: float,
    jumps: Optional[JumpSet] = None,
) -> FluxLedger:
    """
    Flux through the boundaries of one region or a union of regions.

    ``weight`` is the physical i-wave flux (entering counts +sigma, exiting -sigma),
    ``weight_jump`` its part carried by jump-set segments and ``weight_np`` the non-physical
    projection crossing the boundary.
    """
    jumps = jumps if jumps is not None else build_jump_set(log, family, eps0, eps1)
    ledger = FluxLedger(family)
    for region in _as_list(regions):
        if region.family != family:
            raise BoundaryNotCharacteristicError(f"region is bounded by {region.family}-characteristics, not {family}")
        check_boundaries(log, region)
        ledger.extend(_single_flux(log, region, jumps))
    ledger.atoms.sort(key=lambda a: (a.t, a.x))
    return ledger


# --- balance report ---


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + IDENTITY_TOLERANCE * max(1.0, abs(self.rhs))

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "passed": self.passed}


@dataclass
class RegionBalanceReport:
    family: int
    t0: float
    tau: float
    intervals: List[Tuple[float, float]]
    delta_v: float
    delta_v_physical: float
    delta_v_jump: float
    mu_region: float
    rho_region: float
    mu_jump_region: float
    mu_ic_region: float
    mu_icj_region: float
    ledger: FluxLedger
    identity_defect: float
    jump_identity_defect: float
    inequalities: List[Inequality]
    positive_flux_excess: List[Tuple[int, float, float]]
    jump_flux_positive: List[FluxAtom]

    @property
    def identities_hold(self) -> bool:
        scale = max(1.0, abs(self.delta_v_physical), abs(self.ledger.total()))
        return self.identity_defect <= IDENTITY_TOLERANCE * scale and self.jump_identity_defect <= IDENTITY_TOLERANCE * scale

    @property
    def passed(self) -> bool:
        return (
            self.identities_hold
            and all(i.passed for i in self.inequalities)
            and not self.positive_flux_excess
            and not self.jump_flux_positive
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "family": self.family,
            "t0": self.t0,
            "tau": self.tau,
            "intervals": [list(i) for i in self.intervals],
            "delta_v": self.delta_v,
            "delta_v_physical": self.delta_v_physical,
            "delta_v_jump": self.delta_v_jump,
            "mu_region": self.mu_region,
            "rho_region": self.rho_region,
            "mu_jump_region": self.mu_jump_region,
            "flux": self.ledger.total(),
            "flux_jump": self.ledger.jump_total(),
            "flux_np": self.ledger.np_total(),
            "identity_defect": self.identity_defect,
            "jump_identity_defect": self.jump_identity_defect,
            "inequalities": [i.to_dict() for i in self.inequalities],
            "positive_flux_excess": [list(p) for p in self.positive_flux_excess],
            "jump_flux_positive": len(self.jump_flux_positive),
            "passed": self.passed,
        }


def _region_mass(measure: AtomicSpaceTimeMeasure, event_ids: Set[int]) -> float:
    return measure.restrict_events(event_ids).total()


def _content(log: RunLog, region: CharRegion, t: float, jumps: JumpSet) -> Tuple[float, float, float]:
    """(physical, jump, non-physical) i-wave content of the section at time t."""
    book = _Bookkeeper(log, region, jumps)
    totals = [0.0, 0.0, 0.0]
    for front in fronts_at(log, t):
        if book.inside(front, t):
            totals = [s + w for s, w in zip(totals, book.weights(front))]
    return totals[0], totals[1], totals[2]


def region_balance_check(
    log: RunLog,
    family: int,
    regions: Regions,
    eps0: float,
    eps1: float,
    jumps: Optional[JumpSet] = None,
    constant: float = DEFAULT_REGION_CONSTANT,
    cont_constant: Optional[float] = None,
) -> RegionBalanceReport:
    """
    Wave balance on a characteristic region, or on a union of disjoint ones as the sum of
    their balances.

    The exact identities are checked for the physical part and the jump part; the three
    inequalities bound the changes of v, v_jump and v_cont by interaction measures of the region;
    ``cont_constant`` defaults to ``constant``.
    """
    regions = _as_list(regions)
    if not regions:
        raise ValueError("at least one region is required")
    t0, tau = regions[0].t0, regions[0].tau
    if any(r.t0 != t0 or r.tau != tau for r in regions):
        raise ValueError("regions of a union must share t0 and tau")
    jumps = jumps if jumps is not None else build_jump_set(log, family, eps0, eps1)
    ledger = boundary_flux(log, regions, family, eps0, eps1, jumps)

    mu_i, rho = wave_balance_measure(log, family)
    q = jump_balance_measure(log, family, eps0, eps1, jumps)
    _, mu_ic = interaction_measures(log)
    abs_q = q.absolute()

    delta = [0.0, 0.0, 0.0]
    mu_region = rho_region = q_region = ic_region = icj_region = 0.0
    for region in regions:
        start = _content(log, region, t0, jumps)
        end = _content(log, region, t0 + tau, jumps)
        delta = [d + e - s for d, s, e in zip(delta, start, end)]
        ids = {e.id for e in region_events(log, region)}
        mu_region += _region_mass(mu_i, ids)
        rho_region += _region_mass(rho, ids)
        q_region += _region_mass(q, ids)
        ic = _region_mass(mu_ic, ids)
        ic_region += ic
        icj_region += ic + _region_mass(abs_q, ids)
    delta_phys, delta_jump, delta_np = delta
    delta_v = delta_phys + delta_np

    identity_defect = abs(delta_phys - mu_region - ledger.total())
    jump_defect = abs(delta_jump - q_region - ledger.jump_total())

    eps_nu = float(log.params.np_budget)
    cont_constant = constant if cont_constant is None else cont_constant
    inequalities = [
        Inequality("wave_balance", delta_v, constant * (ic_region + eps_nu)),
        Inequality("jump_balance", delta_jump, q_region),
        Inequality("cont_balance", delta_v - delta_jump, cont_constant * (icj_region + eps_nu)),
    ]

    # positive flux at an interaction point is paid for by cancellation there
    ic_by_event = mu_ic.by_event()
    excess: List[Tuple[int, float, float]] = []
    for atom in ledger.positive_atoms():
        if atom.event_id is None:
            continue
        bound = 3.0 * ic_by_event.get(atom.event_id, 0.0)
        if atom.weight > bound + IDENTITY_TOLERANCE:
            excess.append((atom.event_id, atom.weight, bound))
    jump_positive = [a for a in ledger.atoms if a.weight_jump > IDENTITY_TOLERANCE]

    report = RegionBalanceReport(
        family=family,
        t0=t0,
        tau=tau,
        intervals=[(float(r.a.positions[0]), float(r.b.positions[0])) for r in regions],
        delta_v=delta_v,
        delta_v_physical=delta_phys,
        delta_v_jump=delta_jump,
        mu_region=mu_region,
        rho_region=rho_region,
        mu_jump_region=q_region,
        mu_ic_region=ic_region,
        mu_icj_region=icj_region,
        ledger=ledger,
        identity_defect=identity_defect,
        jump_identity_defect=jump_defect,
        inequalities=inequalities,
        positive_flux_excess=excess,
        jump_flux_positive=jump_positive,
    )
    if report.passed:
        logger.info("region balance, family %d, t0=%g, tau=%g: ok", family, t0, tau)
    else:
        logger.warning(
            "region balance, family %d, t0=%g, tau=%g: identity defect %.3e, jump defect %.3e",
            family,
            t0,
            tau,
            identity_defect,
            jump_defect,
        )
    return report

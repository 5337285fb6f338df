"""Candidate exceptional times: atoms of the time marginal of mu_ICJ above a threshold."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from fronttrack.engine.records import RunLog
from fronttrack.genealogy.paths import jump_set
from fronttrack.measures.atomic import AtomicSpaceTimeMeasure
from fronttrack.measures.balance import icj_measure, jump_balance_measure
from fronttrack.measures.interaction import interaction_measures

logger = logging.getLogger(__name__)

DEFAULT_JUMP_THRESHOLD = 1e-3
ATTRIBUTION_TOLERANCE = 1e-14


@dataclass(frozen=True)
class ExceptionalTime:
    t: float
    mass: float
    families: Tuple[int, ...]
    attributions: Tuple[str, ...]

    def to_dict(self) -> Dict[str, object]:
        return {"t": self.t, "mass": self.mass, "families": list(self.families), "attributions": list(self.attributions)}


def _attribute(log: RunLog, t: float, mu_i: AtomicSpaceTimeMeasure, mu_ic: AtomicSpaceTimeMeasure, q: AtomicSpaceTimeMeasure) -> Set[str]:
    out: Set[str] = set()
    event_ids = [e.id for e in log.events if e.time == t]
    for eid in event_ids:
        interaction = mu_i.weight_at_event(eid)
        if interaction > ATTRIBUTION_TOLERANCE:
            out.add("interaction")
        if mu_ic.weight_at_event(eid) - interaction > ATTRIBUTION_TOLERANCE:
            out.add("cancellation")
    for atom in q.restrict_events(event_ids):
        if abs(atom.weight) <= ATTRIBUTION_TOLERANCE:
            continue
        if atom.kind == "initial":
            out.add("jump-creation")
        elif atom.kind == "terminal":
            out.add("jump-termination")
        else:
            out.add("jump-balance")
    return out


def exceptional_times(
    log: RunLog,
    ladder: Optional[Sequence[Tuple[float, float]]] = None,
    jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
    families: Optional[Iterable[int]] = None,
) -> List[ExceptionalTime]:
    """
    Times t > 0 at which mu_ICJ of some genuinely nonlinear family, at some level of the
    threshold ladder, carries mass >= jump_threshold, sorted by time.
    """
    ladder = tuple(ladder) if ladder is not None else log.params.epsilon_ladder
    if families is None:
        families = [i for i in range(1, log.model.n_eqs + 1) if log.model.is_genuinely_nonlinear(i)]
    mu_i, mu_ic = interaction_measures(log)

    found: Dict[float, Tuple[float, Set[int], Set[str]]] = {}
    for family in families:
        for eps0, eps1 in ladder:
            jumps = jump_set(log, family, eps0, eps1)
            q = jump_balance_measure(log, family, eps0, eps1, jumps)
            marginal = icj_measure(log, family, eps0, eps1, jumps).time_marginal()
            for t, mass in marginal.items():
                t, mass = float(t), float(mass)
                if t <= 0.0 or mass < jump_threshold:
                    continue
                best, fams, reasons = found.get(t, (0.0, set(), set()))
                fams.add(family)
                reasons |= _attribute(log, t, mu_i, mu_ic, q)
                found[t] = (max(best, mass), fams, reasons)

    out = [
        ExceptionalTime(t, mass, tuple(sorted(fams)), tuple(sorted(reasons)))
        for t, (mass, fams, reasons) in sorted(found.items())
    ]
    logger.info("%d exceptional time(s) at threshold %g", len(out), jump_threshold)
    return out

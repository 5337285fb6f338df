"""
Wave balance measures of one family.

At every event the family-i wave content of the outgoing fronts minus that of the incoming
fronts is split into a physical atom (``mu_i``) and a non-physical remainder (``rho``), so the
jump of the total i-wave mass across the event is exactly their sum. The jump variant does
the same bookkeeping restricted to the segments of a jump set, plus the tracked fronts present
at t = 0.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from fronttrack.engine.records import INITIAL_NODE, Front, InteractionEvent, RunLog
from fronttrack.errors import InconsistentJumpSetError
from fronttrack.genealogy.paths import JumpSet, is_tracked, jump_set as build_jump_set
from fronttrack.measures.atomic import Atom, AtomicSpaceTimeMeasure, combine_atoms
from fronttrack.measures.interaction import interaction_measures
from fronttrack.model.averaging import projected_strengths

logger = logging.getLogger(__name__)

JUMP_CASES = ("triple", "initial", "terminal", "continuation")


def np_projection(log: RunLog, front: Front) -> np.ndarray:
    """Averaged left-eigenvector components of a non-physical front's jump, one per family."""
    cache: Dict[int, np.ndarray] = log._cache.setdefault("np_projection", {})
    if front.id not in cache:
        cache[front.id] = projected_strengths(log.model, front.left_state, front.right_state)
    return cache[front.id]


def wave_atom(log: RunLog, front: Front, family: int) -> float:
    """i-wave content of one front: its strength for an i-front, zero for other physical families."""
    if front.is_physical:
        return front.strength if front.family == family else 0.0
    return float(np_projection(log, front)[family - 1])


def _np_difference(log: RunLog, event: InteractionEvent, family: int) -> Optional[float]:
    ins = [log.fronts[fid] for fid in event.incoming if not log.fronts[fid].is_physical]
    outs = [log.fronts[fid] for fid in event.outgoing if not log.fronts[fid].is_physical]
    if not ins and not outs:
        return None
    return math.fsum(wave_atom(log, f, family) for f in outs) - math.fsum(wave_atom(log, f, family) for f in ins)


def _touches_family(event: InteractionEvent, family: int) -> bool:
    return family in event.families()


def wave_balance_measure(log: RunLog, family: int) -> Tuple[AtomicSpaceTimeMeasure, AtomicSpaceTimeMeasure]:
    """
    (mu_i, rho) for family i.

    mu_i has an atom sigma_out - sigma_in (physical i-fronts) at every event touching the family;
    rho collects the change of the non-physical projections at events with a non-physical front.
    """
    mu, rho = [], []
    for event in log.events:
        if _touches_family(event, family):
            p = event.outgoing_total(family) - event.incoming_total(family)
            mu.append(Atom(event.time, event.position, p, event.id, "wave_balance"))
        remainder = _np_difference(log, event, family)
        if remainder is not None:
            rho.append(Atom(event.time, event.position, remainder, event.id, "np_remainder"))
    mu_i = AtomicSpaceTimeMeasure(mu, name=f"mu_{family}")
    rho_i = AtomicSpaceTimeMeasure(rho, name=f"rho_{family}")
    logger.debug("family %d: |mu| = %.3e, |rho| = %.3e", family, mu_i.total_variation(), rho_i.total_variation())
    return mu_i, rho_i


def _check_jump_set(log: RunLog, family: int, eps0: float, eps1: float, jumps: JumpSet) -> None:
    if jumps.family != family or not (math.isclose(jumps.eps0, eps0) and math.isclose(jumps.eps1, eps1)):
        raise InconsistentJumpSetError(
            f"jump set was built for family {jumps.family}, ({jumps.eps0:g}, {jumps.eps1:g}); "
            f"requested family {family}, ({eps0:g}, {eps1:g})"
        )
    for fid in jumps.segments:
        front = log.fronts.get(fid)
        if front is None or not is_tracked(front, family, eps0):
            raise InconsistentJumpSetError(f"segment {fid} is not a tracked {family}-front of this run")
    for path in jumps.paths:
        for prev_id, next_id, node in zip(path.segments[:-1], path.segments[1:], path.nodes[1:-1]):
            prev, nxt = log.fronts[prev_id], log.fronts[next_id]
            if prev.child_event is None or prev.child_event != nxt.parent_event or node.event_id != prev.child_event:
                raise InconsistentJumpSetError(f"path {path.path_id}: segments {prev_id} -> {next_id} do not meet at node {node.event_id}")
        for fid, sigma in zip(path.segments, path.strengths):
            if log.fronts[fid].strength != sigma:
                raise InconsistentJumpSetError(f"path {path.path_id}: strength of segment {fid} differs from the log")


def _jump_case(n_in: int, n_out: int) -> str:
    if n_in == 2:
        return "triple" if n_out else "terminal"
    if n_in == 0:
        return "initial"
    return "continuation" if n_out else "terminal"


def jump_balance_measure(
    log: RunLog,
    family: int,
    eps0: float,
    eps1: float,
    jumps: Optional[JumpSet] = None,
) -> AtomicSpaceTimeMeasure:
    """
    Atom q at every event touching the jump set: the tracked outgoing strength minus the
    tracked incoming strength. The atom kind names the node case. Tracked fronts of the initial
    datum get an ``initial`` atom q = sigma at their starting point on t = 0.
    """
    if jumps is None:
        jumps = build_jump_set(log, family, eps0, eps1)
    _check_jump_set(log, family, eps0, eps1, jumps)

    atoms: List[Atom] = [
        Atom(front.birth_t, front.birth_x, front.strength, INITIAL_NODE, "initial")
        for front in (log.fronts[fid] for fid in log.initial_ids)
        if front.id in jumps
    ]
    for event in log.events:
        ins = [log.fronts[fid] for fid in event.incoming if fid in jumps]
        outs = [log.fronts[fid] for fid in event.outgoing if fid in jumps]
        if not ins and not outs:
            continue
        q = math.fsum(f.strength for f in outs) - math.fsum(f.strength for f in ins)
        atoms.append(Atom(event.time, event.position, q, event.id, _jump_case(len(ins), len(outs))))
    return AtomicSpaceTimeMeasure(atoms, name=f"mu_{family}_jump")


def icj_measure(
    log: RunLog,
    family: int,
    eps0: float,
    eps1: float,
    jumps: Optional[JumpSet] = None,
) -> AtomicSpaceTimeMeasure:
    """Interaction-cancellation-jump measure: mu_IC plus |mu_i,jump|, merged atom by atom."""
    _, mu_ic = interaction_measures(log)
    q = jump_balance_measure(log, family, eps0, eps1, jumps)
    return combine_atoms(f"mu_ICJ_{family}", [(mu_ic, False), (q, True)], kind="icj")

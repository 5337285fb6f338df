"""
Event-driven front tracking.

Fronts are kept in a doubly linked list in spatial order; only neighbours can collide. Every
collision is resolved by the accurate Riemann solver, or by the simplified one when a
non-physical front takes part or the strength product is below ``np_threshold``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from fronttrack.engine.initial import InitialData
from fronttrack.engine.params import RunParams
from fronttrack.engine.queue import CollisionQueue
from fronttrack.engine.records import Front, InteractionEvent, RunLog
from fronttrack.errors import BudgetExceededError, FrontCountExplosionError
from fronttrack.model.systems import SystemModel
from fronttrack.riemann.simplified import solve_simplified
from fronttrack.riemann.solver import ZERO_STRENGTH, discretize_rarefaction, solve_riemann
from fronttrack.riemann.waves import SolverKind, SubJump, Wave, WaveFan, WaveKind

logger = logging.getLogger(__name__)

TIE_ROUNDS = 3
NU_SLACK = 1e-12


def id_hash(front_id: int) -> float:
    """Deterministic pseudo-random number in (0, 1) attached to a front id."""
    digest = hashlib.sha256(str(front_id).encode("ascii")).digest()
    return (int.from_bytes(digest[:8], "big") + 1) / (2**64 + 2)


def collision_time(left: Front, right: Front) -> Optional[float]:
    """Meeting time of two straight fronts, None when they do not approach."""
    if not left.speed > right.speed:
        return None
    numerator = (right.birth_x - right.speed * right.birth_t) - (left.birth_x - left.speed * left.birth_t)
    return numerator / (left.speed - right.speed)


class _Tracker:
    def __init__(self, model: SystemModel, params: RunParams, initial: InitialData) -> None:
        self.model = model
        self.params = params
        self.now = 0.0
        self.queue = CollisionQueue(params.time_tolerance)
        self.fronts: Dict[int, Front] = {f.id: dataclasses.replace(f) for f in initial.fronts}
        self.next_id = max(self.fronts, default=-1) + 1
        self.left_of: Dict[int, Optional[int]] = {}
        self.right_of: Dict[int, Optional[int]] = {}
        self.head: Optional[int] = None
        self.events: List[InteractionEvent] = []
        self.np_active: Dict[int, float] = {}
        self.np_peak = 0.0

        ids = [f.id for f in initial.fronts]
        for k, fid in enumerate(ids):
            self.left_of[fid] = ids[k - 1] if k > 0 else None
            self.right_of[fid] = ids[k + 1] if k + 1 < len(ids) else None
            if not self.fronts[fid].is_physical:
                self.np_active[fid] = self.fronts[fid].strength
        self.head = ids[0] if ids else None
        self.np_peak = self._np_total()

        self.log = RunLog(
            model=model,
            params=params,
            left_state=np.asarray(initial.left_state, dtype=float),
            right_state=np.asarray(initial.right_state, dtype=float),
            fronts=self.fronts,
            initial_ids=tuple(ids),
        )

    # --- bookkeeping ---

    def _np_total(self) -> float:
        return math.fsum(self.np_active.values())

    def ordered_ids(self) -> Tuple[int, ...]:
        out = []
        cur = self.head
        while cur is not None:
            out.append(cur)
            cur = self.right_of[cur]
        return tuple(out)

    def _finalize(self) -> RunLog:
        self.log.events = self.events
        self.log.final_ids = self.ordered_ids()
        self.log.np_peak = self.np_peak
        self.log.invalidate()
        return self.log

    # --- scheduling ---

    def _perturb(self, front: Front) -> None:
        delta = self.params.speed_perturb * id_hash(front.id)
        front.speed += delta
        front.perturbation += delta
        logger.debug("perturbed front %d speed by %.3e at t=%.17g", front.id, delta, self.now)

    def _tie_candidate(self, left: Front, right: Front) -> Optional[Front]:
        """The later-created front of the pair, provided it was born now and can still be bent."""
        for front in sorted((left, right), key=lambda f: -f.id):
            if front.birth_t == self.now and self.params.speed_perturb > 0.0:
                return front
        return None

    def schedule(self, left_id: Optional[int], rounds: int = TIE_ROUNDS) -> None:
        if left_id is None:
            return
        right_id = self.right_of[left_id]
        self.queue.cancel(left_id)
        if right_id is None:
            return
        left, right = self.fronts[left_id], self.fronts[right_id]
        t = collision_time(left, right)
        if t is None:
            return
        t = max(t, self.now)
        if t > self.params.horizon:
            return

        if rounds > 0 and self.queue.has_tie(t):
            bent = self._tie_candidate(left, right)
            if bent is not None:
                self._perturb(bent)
                # the bent front also bounds the neighbouring pair on its other side
                other = self.left_of[bent.id] if bent.id == left_id else right_id
                if other is not None and other != left_id:
                    self.schedule(other, rounds - 1)
                self.schedule(left_id, rounds - 1)
                return

        self.queue.schedule(t, left.position(t), left_id, right_id)

    # --- resolution ---

    def _fan(self, left: Front, right: Front) -> WaveFan:
        u_l, u_r = left.left_state, right.right_state
        simplified = (
            not left.is_physical
            or not right.is_physical
            or abs(left.strength * right.strength) < self.params.np_threshold
        )
        if simplified:
            return solve_simplified(
                self.model,
                u_l,
                u_r,
                [(left.family, left.strength), (right.family, right.strength)],
            )
        return solve_riemann(self.model, u_l, u_r, nu=self.params.nu)

    def _jumps(self, wave: Wave) -> List[SubJump]:
        if wave.kind is WaveKind.RAREFACTION_FAN and not wave.sub_jumps and wave.strength > self.params.nu * (1.0 + NU_SLACK):
            return discretize_rarefaction(self.model, wave, self.params.nu)
        return wave.jumps()

    def _new_front(self, wave: Wave, jump: SubJump, t: float, x: float, event_id: int) -> Front:
        front = Front(
            id=self.next_id,
            family=wave.family,
            kind=wave.kind,
            strength=float(jump.strength),
            speed=float(jump.speed),
            left_state=jump.left_state,
            right_state=jump.right_state,
            birth_t=t,
            birth_x=x,
            parent_event=event_id,
        )
        self.next_id += 1
        if self.next_id > self.params.max_fronts:
            raise FrontCountExplosionError(
                f"{self.model.name}: more than {self.params.max_fronts} fronts created by t={t:.6g}",
                log=self._finalize(),
            )
        return front

    def resolve(self, left_id: int, right_id: int, t: float) -> InteractionEvent:
        left, right = self.fronts[left_id], self.fronts[right_id]
        x = left.position(t)
        event_id = len(self.events)
        fan = self._fan(left, right)

        outgoing: List[Front] = []
        cancelled: List[Tuple[int, float]] = []
        for wave in fan.waves:
            for jump in self._jumps(wave):
                if abs(jump.strength) < ZERO_STRENGTH:
                    cancelled.append((wave.family, float(jump.strength)))
                    continue
                outgoing.append(self._new_front(wave, jump, t, x, event_id))
        if outgoing:
            # dropped remainders must not leave a gap in the state chain
            outgoing[0].left_state = left.left_state
            outgoing[-1].right_state = right.right_state

        notes = list(fan.notes)
        if cancelled:
            notes.append(f"cancellation: dropped {len(cancelled)} front(s) below {ZERO_STRENGTH:g}")

        for dead in (left, right):
            dead.death_t = t
            dead.death_x = x
            dead.child_event = event_id
            self.np_active.pop(dead.id, None)

        # splice outgoing fronts in place of the pair
        before, after = self.left_of[left_id], self.right_of[right_id]
        chain = [f.id for f in outgoing]
        for front in outgoing:
            self.fronts[front.id] = front
            if not front.is_physical:
                self.np_active[front.id] = front.strength
        prev = before
        for fid in chain:
            self.left_of[fid] = prev
            if prev is None:
                self.head = fid
            else:
                self.right_of[prev] = fid
            prev = fid
        if prev is None:
            self.head = after
        else:
            self.right_of[prev] = after
        if after is not None:
            self.left_of[after] = prev
        for dead_id in (left_id, right_id):
            self.queue.cancel(dead_id)
            del self.left_of[dead_id]
            del self.right_of[dead_id]

        event = InteractionEvent(
            id=event_id,
            time=t,
            position=x,
            incoming=(left_id, right_id),
            outgoing=tuple(chain),
            solver=fan.solver,
            incoming_strengths=((left.family, left.strength), (right.family, right.strength)),
            outgoing_strengths=tuple((f.family, f.strength) for f in outgoing),
            non_physical=not (left.is_physical and right.is_physical),
            cancelled=tuple(cancelled),
            notes=tuple(notes),
        )
        self.events.append(event)

        self.schedule(before)
        for fid in chain:
            self.schedule(fid)
        return event

    def _check_budget(self, t: float) -> None:
        total = self._np_total()
        self.np_peak = max(self.np_peak, total)
        if total > self.params.np_budget:
            message = f"non-physical strength {total:.6g} exceeds budget {self.params.np_budget:.6g} at t={t:.6g}"
            logger.warning("%s: %s", self.model.name, message)
            self.log.alarms.append(message)
            raise BudgetExceededError(message, log=self._finalize())

    def run(self) -> RunLog:
        ids = self.ordered_ids()
        for fid in ids:
            self.schedule(fid)

        while True:
            collision = self.queue.pop_next()
            if collision is None or collision.time > self.params.horizon:
                break
            self.now = collision.time
            event = self.resolve(collision.left_id, collision.right_id, collision.time)
            logger.debug(
                "event %d at (t=%.9g, x=%.9g): %s -> %s [%s]",
                event.id,
                event.time,
                event.position,
                list(event.incoming),
                list(event.outgoing),
                event.solver.value,
            )
            self._check_budget(collision.time)

        return self._finalize()


def run(
    model: SystemModel,
    params: RunParams,
    initial: Union[InitialData, Sequence[Front]],
    left_state: Optional[np.ndarray] = None,
    right_state: Optional[np.ndarray] = None,
) -> RunLog:
    """
    Evolve the initial fronts up to ``params.horizon``.

    A bare sequence of fronts is accepted as well; the far states then default to the outer
    states of the first and last front.
    """
    if not isinstance(initial, InitialData):
        fronts = tuple(initial)
        if not fronts and (left_state is None or right_state is None):
            raise ValueError("far states are required when there are no fronts")
        initial = InitialData(
            fronts=fronts,
            left_state=left_state if left_state is not None else fronts[0].left_state,
            right_state=right_state if right_state is not None else fronts[-1].right_state,
            breakpoints=(),
            states=(),
        )

    logger.info("%s: tracking %d fronts up to T=%g with nu=%g", model.name, len(initial.fronts), params.horizon, params.nu)
    tracker = _Tracker(model, params, initial)
    log = tracker.run()
    logger.info(
        "%s: %d events, %d fronts created, %d alive at T, NP peak %.3e",
        model.name,
        len(log.events),
        len(log.fronts),
        len(log.final_ids),
        log.np_peak,
    )
    return log

"""
Generalized characteristics of one family through a front-tracking solution.

The solution is piecewise constant, so a characteristic is a polyline: inside a constant
region it moves with lambda_i of the state, on a front it either sticks to the front or leaves
on one side. At a point where several fronts meet (an event) the candidates are ordered by
speed; the minimal selection takes the slowest admissible one, the maximal the fastest.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fronttrack.engine.queries import fronts_at, positions_at, slabs
from fronttrack.engine.records import Front, RunLog
from fronttrack.errors import NoConvergenceError
from fronttrack.model.eigen import raw_eigenvalues

logger = logging.getLogger(__name__)

POSITION_TOLERANCE = 1e-11
SPEED_TOLERANCE = 1e-9


class Selection(str, Enum):
    MINIMAL = "minimal"
    MAXIMAL = "maximal"


@dataclass(frozen=True)
class CharacteristicPath:
    family: int
    selection: Selection
    times: np.ndarray
    positions: np.ndarray
    riding: Tuple[Optional[int], ...]  # front followed on each segment, None inside a region

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def at(self, t: float) -> float:
        if not self.t0 - 1e-14 <= t <= self.t_end + 1e-14:
            raise ValueError(f"t={t:g} outside [{self.t0:g}, {self.t_end:g}]")
        return float(np.interp(t, self.times, self.positions))

    def speeds(self) -> np.ndarray:
        dt = np.diff(self.times)
        return np.divide(np.diff(self.positions), dt, out=np.zeros_like(dt), where=dt > 0)

    def to_frame(self) -> pd.DataFrame:
        riding = list(self.riding) + [None]
        return pd.DataFrame({"t": self.times, "x": self.positions, "front": riding})


def _lam(log: RunLog, u: np.ndarray, family: int) -> float:
    return float(raw_eigenvalues(log.model, u)[family - 1])


def _region_state(log: RunLog, fronts: Sequence[Front], r: int) -> np.ndarray:
    """State of region r, between fronts r-1 and r."""
    if not fronts:
        return log.left_state
    return fronts[0].left_state if r == 0 else fronts[r - 1].right_state


def _on_front(positions: np.ndarray, x: float) -> Tuple[int, int]:
    """Index range [lo, hi) of fronts sitting at x."""
    tol = POSITION_TOLERANCE * max(1.0, abs(x))
    lo = int(np.searchsorted(positions, x - tol, side="left"))
    hi = int(np.searchsorted(positions, x + tol, side="right"))
    return lo, hi


def _candidates(log: RunLog, fronts: Sequence[Front], lo: int, hi: int, family: int) -> List[Tuple[str, int, float]]:
    """
    Admissible continuations from a point carrying fronts lo..hi-1, ordered by speed.

    A region between two of them is admissible when its speed lies between theirs; a front
    is admissible when it is compressive for the family (lambda right <= s <= lambda left).
    """
    out: List[Tuple[str, int, float]] = []
    for r in range(lo, hi + 1):
        lam = _lam(log, _region_state(log, fronts, r), family)
        s_left = fronts[r - 1].speed if r > lo else -np.inf
        s_right = fronts[r].speed if r < hi else np.inf
        if s_left - SPEED_TOLERANCE <= lam <= s_right + SPEED_TOLERANCE:
            out.append(("region", r, lam))
        if r < hi:
            front = fronts[r]
            lam_l = _lam(log, front.left_state, family)
            lam_r = _lam(log, front.right_state, family)
            if lam_r - SPEED_TOLERANCE <= front.speed <= lam_l + SPEED_TOLERANCE:
                out.append(("front", r, front.speed))
    return out


def _hit_time(t: float, x: float, speed: float, fronts: Sequence[Front], positions: np.ndarray, r: int) -> float:
    """First time a point moving inside region r meets one of the two bounding fronts."""
    hit = np.inf
    tol = POSITION_TOLERANCE * max(1.0, abs(x))
    if r > 0:
        gap = x - positions[r - 1]
        closing = fronts[r - 1].speed - speed
        if closing > 0.0 and gap > tol:
            hit = min(hit, t + gap / closing)
    if r < len(fronts):
        gap = positions[r] - x
        closing = speed - fronts[r].speed
        if closing > 0.0 and gap > tol:
            hit = min(hit, t + gap / closing)
    return hit


def _next_slab_end(starts: Sequence[float], t: float) -> float:
    k = bisect.bisect_right(starts, t)
    return starts[k] if k < len(starts) else np.inf


def characteristic(
    log: RunLog,
    t0: float,
    x0: float,
    family: int,
    tau: float,
    selection: Selection = Selection.MINIMAL,
) -> CharacteristicPath:
    """Generalized characteristic of ``family`` from (t0, x0) up to t0 + tau."""
    t_end = t0 + tau
    if tau < 0.0 or t0 < 0.0 or t_end > log.horizon * (1.0 + 1e-12):
        raise ValueError(f"[{t0:g}, {t_end:g}] is not inside [0, {log.horizon:g}]")
    selection = Selection(selection)

    times, xs, riding = [t0], [x0], []
    t, x = t0, x0
    attached: Optional[Front] = None
    starts = [slab.start for slab in slabs(log)]
    max_steps = 4 * (len(log.events) + len(log.fronts)) + 16
    for _ in range(max_steps):
        if t >= t_end:
            break
        stop = min(t_end, _next_slab_end(starts, t))
        if attached is not None and attached.alive_at(t):
            t_next = min(stop, attached.end_t)
            x = attached.position(t_next)
            times.append(t_next)
            xs.append(x)
            riding.append(attached.id)
            t = t_next
            continue
        attached = None

        fronts = fronts_at(log, t)
        positions = positions_at(fronts, t)
        lo, hi = _on_front(positions, x)
        if hi > lo:
            options = _candidates(log, fronts, lo, hi, family)
            kind, index, speed = options[0] if selection is Selection.MINIMAL else options[-1]
            if kind == "front":
                attached = fronts[index]
                continue
            region = index
        else:
            region = lo
            speed = _lam(log, _region_state(log, fronts, region), family)
        t_next = min(stop, _hit_time(t, x, speed, fronts, positions, region))
        x = x + speed * (t_next - t)
        times.append(t_next)
        xs.append(x)
        riding.append(None)
        t = t_next
    else:
        raise NoConvergenceError(f"characteristic from ({t0:g}, {x0:g}) did not reach t={t_end:g}")

    logger.debug("%s %d-characteristic from (%g, %g): %d segments", selection.value, family, t0, x0, len(riding))
    return CharacteristicPath(family, selection, np.array(times), np.array(xs), tuple(riding))


def minimal_characteristic(log: RunLog, t0: float, x0: float, family: int, tau: float) -> CharacteristicPath:
    return characteristic(log, t0, x0, family, tau, Selection.MINIMAL)


def maximal_characteristic(log: RunLog, t0: float, x0: float, family: int, tau: float) -> CharacteristicPath:
    return characteristic(log, t0, x0, family, tau, Selection.MAXIMAL)


def admissible_speed(log: RunLog, t: float, x: float, family: int, speed: float) -> bool:
    """True when a characteristic through (t, x) may move with ``speed`` right after t."""
    fronts = fronts_at(log, t)
    positions = positions_at(fronts, t)
    lo, hi = _on_front(positions, x)
    if hi == lo:
        return abs(speed - _lam(log, _region_state(log, fronts, lo), family)) <= SPEED_TOLERANCE
    return any(abs(speed - s) <= SPEED_TOLERANCE for _, _, s in _candidates(log, fronts, lo, hi, family))


def states_around(log: RunLog, t: float, x: float) -> Tuple[np.ndarray, np.ndarray]:
    """(u(t, x-), u(t, x+)); fronts sitting at x separate the two."""
    fronts = fronts_at(log, t)
    positions = positions_at(fronts, t)
    lo, hi = _on_front(positions, x)
    return _region_state(log, fronts, lo), _region_state(log, fronts, hi)


def characteristic_speed(log: RunLog, u: np.ndarray, family: int) -> float:
    return _lam(log, u, family)

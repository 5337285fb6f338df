"""Read-only queries on a run log: replay, active fronts, point values and total strengths."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from fronttrack.engine.records import Front, InteractionEvent, RunLog
from fronttrack.errors import ReplayError


@dataclass(frozen=True)
class Slab:
    """Time interval [start, end) during which the ordered front list ``ids`` is unchanged."""

    start: float
    end: float
    ids: Tuple[int, ...]
    event: Optional[InteractionEvent] = None


def _apply(ids: List[int], event: InteractionEvent, log: RunLog) -> List[int]:
    left, right = event.incoming
    try:
        k = ids.index(left)
    except ValueError as exc:
        raise ReplayError(f"event {event.id}: front {left} is not active") from exc
    if k + 1 >= len(ids) or ids[k + 1] != right:
        raise ReplayError(f"event {event.id}: fronts {left} and {right} are not adjacent")
    for fid in event.incoming:
        front = log.fronts[fid]
        if front.child_event != event.id or front.death_t != event.time:
            raise ReplayError(f"event {event.id}: front {fid} does not end at this event")
    for fid in event.outgoing:
        front = log.fronts[fid]
        if front.parent_event != event.id or front.birth_t != event.time or front.birth_x != event.position:
            raise ReplayError(f"event {event.id}: front {fid} is not born at this event")
    return ids[:k] + list(event.outgoing) + ids[k + 2 :]


def replay(log: RunLog) -> Iterator[Slab]:
    """Re-apply every event to the initial fronts, yielding the slabs between events."""
    ids = list(log.initial_ids)
    start = 0.0
    prev_event: Optional[InteractionEvent] = None
    for event in log.events:
        if event.time < start:
            raise ReplayError(f"event {event.id} at t={event.time} precedes t={start}")
        yield Slab(start, event.time, tuple(ids), prev_event)
        ids = _apply(ids, event, log)
        start = event.time
        prev_event = event
    if tuple(ids) != tuple(log.final_ids):
        raise ReplayError("replayed final fronts differ from the logged ones")
    yield Slab(start, math.inf, tuple(ids), prev_event)


def slabs(log: RunLog) -> List[Slab]:
    if "slabs" not in log._cache:
        log._cache["slabs"] = list(replay(log))
    return log._cache["slabs"]


def _slab_starts(log: RunLog) -> List[float]:
    if "slab_starts" not in log._cache:
        log._cache["slab_starts"] = [s.start for s in slabs(log)]
    return log._cache["slab_starts"]


def _slab_at(log: RunLog, t: float) -> Slab:
    # last slab starting at or before t: post-event configuration at event times
    k = bisect.bisect_right(_slab_starts(log), t) - 1
    return slabs(log)[max(k, 0)]


def fronts_at(log: RunLog, t: float) -> List[Front]:
    """Active fronts at time t, left to right (right-continuous in t)."""
    return [log.fronts[i] for i in _slab_at(log, t).ids]


def fronts_before(log: RunLog, t: float) -> List[Front]:
    """Fronts active just before time t, left to right."""
    k = bisect.bisect_left(_slab_starts(log), t) - 1
    return [log.fronts[i] for i in slabs(log)[max(k, 0)].ids]


def positions_at(fronts: List[Front], t: float) -> np.ndarray:
    if not fronts:
        return np.empty(0)
    raw = np.array([f.position(t) for f in fronts], dtype=float)
    # rounding may invert fronts that are about to meet
    return np.maximum.accumulate(raw)


def state_at(log: RunLog, t: float, x: float) -> np.ndarray:
    """Value at (t, x), right-continuous in both variables."""
    fronts = fronts_at(log, t)
    if not fronts:
        return log.left_state.copy()
    positions = positions_at(fronts, t)
    k = int(np.searchsorted(positions, x, side="right"))
    if k == 0:
        return fronts[0].left_state.copy()
    return fronts[k - 1].right_state.copy()


def total_variation(log: RunLog, t: float) -> float:
    return math.fsum(abs(f.strength) for f in fronts_at(log, t) if f.is_physical)


def np_total_strength(log: RunLog, t: float) -> float:
    return math.fsum(abs(f.strength) for f in fronts_at(log, t) if not f.is_physical)


def snapshot_frame(log: RunLog) -> pd.DataFrame:
    """
    Piecewise-constant profile at t = 0 and right after every event time.

    One row per constant piece with its left end (``-inf`` for the leftmost piece).
    """
    columns = ["t", "x_left"] + [f"u_{k}" for k in range(1, log.model.n_eqs + 1)]
    rows = []
    items = slabs(log)
    for k, slab in enumerate(items):
        # several events at one time: keep only the configuration after the last one
        if k + 1 < len(items) and items[k + 1].start == slab.start:
            continue
        fronts = [log.fronts[i] for i in slab.ids]
        positions = positions_at(fronts, slab.start)
        state = fronts[0].left_state if fronts else log.left_state
        rows.append([slab.start, -math.inf, *state.tolist()])
        for front, x in zip(fronts, positions):
            rows.append([slab.start, float(x), *front.right_state.tolist()])
    return pd.DataFrame(rows, columns=columns)

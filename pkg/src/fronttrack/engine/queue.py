"""
Collision queue for adjacent front pairs.

Uses heapq with lazy invalidation: each left front owns at most one pending collision (with its
current right neighbour); rescheduling bumps the serial number and stale heap entries are
skipped on pop.
"""

from __future__ import annotations

import bisect
import heapq
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple


@dataclass(frozen=True, order=True)
class Collision:
    time: float
    serial: int
    position: float
    left_id: int
    right_id: int


class CollisionQueue:
    """Pending collisions ordered by time, ties within ``tolerance`` resolved leftmost first."""

    def __init__(self, tolerance: float) -> None:
        self.tolerance = tolerance
        self._heap: List[Collision] = []
        self._pending: Dict[int, Collision] = {}
        self._times: List[Tuple[float, int]] = []
        self._serials = itertools.count()

    def __len__(self) -> int:
        return len(self._pending)

    def is_empty(self) -> bool:
        return not self._pending

    def schedule(self, time: float, position: float, left_id: int, right_id: int) -> Collision:
        self.cancel(left_id)
        entry = Collision(time, next(self._serials), position, left_id, right_id)
        heapq.heappush(self._heap, entry)
        self._pending[left_id] = entry
        bisect.insort(self._times, (time, entry.serial))
        return entry

    def cancel(self, left_id: int) -> None:
        entry = self._pending.pop(left_id, None)
        if entry is None:
            return
        k = bisect.bisect_left(self._times, (entry.time, entry.serial))
        if k < len(self._times) and self._times[k] == (entry.time, entry.serial):
            del self._times[k]

    def pending_for(self, left_id: int) -> Optional[Collision]:
        return self._pending.get(left_id)

    def has_tie(self, time: float, exclude_left: Optional[int] = None) -> bool:
        """True when another pending collision falls within the time tolerance of ``time``."""
        lo = bisect.bisect_left(self._times, (time - self.tolerance, -1))
        hi = bisect.bisect_right(self._times, (time + self.tolerance, float("inf")))
        excluded = self._pending.get(exclude_left) if exclude_left is not None else None
        for _, serial in self._times[lo:hi]:
            if excluded is None or serial != excluded.serial:
                return True
        return False

    def _is_live(self, entry: Collision) -> bool:
        current = self._pending.get(entry.left_id)
        return current is not None and current.serial == entry.serial

    def peek_time(self) -> Optional[float]:
        while self._heap and not self._is_live(self._heap[0]):
            heapq.heappop(self._heap)
        return self._heap[0].time if self._heap else None

    def pop_next(self) -> Optional[Collision]:
        """Earliest collision; among those within the tolerance the leftmost pair wins."""
        first_time = self.peek_time()
        if first_time is None:
            return None

        candidates: List[Collision] = []
        while self._heap and self._heap[0].time <= first_time + self.tolerance:
            entry = heapq.heappop(self._heap)
            if self._is_live(entry):
                candidates.append(entry)

        chosen = min(candidates, key=lambda c: (c.position, c.left_id))
        for entry in candidates:
            if entry is not chosen:
                heapq.heappush(self._heap, entry)
        self.cancel(chosen.left_id)
        return chosen

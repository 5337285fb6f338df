"""Records of a front-tracking run: fronts, interaction events and the run log holding them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from fronttrack.engine.params import RunParams
from fronttrack.model.systems import SystemModel
from fronttrack.riemann.waves import SolverKind, WaveKind

StrengthPairs = Tuple[Tuple[int, float], ...]

# event id used for nodes on the initial line
INITIAL_NODE = -1


@dataclass
class Front:
    """
    A straight discontinuity line between its birth and death events.

    ``speed`` is the speed the front actually travels with; ``perturbation`` is the part of it
    added to de-synchronize collisions (zero for almost every front).
    """

    id: int
    family: int
    kind: WaveKind
    strength: float
    speed: float
    left_state: np.ndarray
    right_state: np.ndarray
    birth_t: float
    birth_x: float
    parent_event: Optional[int] = None
    death_t: Optional[float] = None
    death_x: Optional[float] = None
    child_event: Optional[int] = None
    perturbation: float = 0.0

    @property
    def is_physical(self) -> bool:
        return self.kind is not WaveKind.NON_PHYSICAL

    @property
    def is_shock(self) -> bool:
        return self.kind is WaveKind.SHOCK

    @property
    def end_t(self) -> float:
        return math.inf if self.death_t is None else self.death_t

    def alive_at(self, t: float) -> bool:
        # right-continuous: born at t counts, dying at t does not
        return self.birth_t <= t < self.end_t

    def position(self, t: float) -> float:
        return self.birth_x + self.speed * (t - self.birth_t)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "family": self.family,
            "kind": self.kind.value,
            "strength": self.strength,
            "speed": self.speed,
            "left_state": [float(v) for v in self.left_state],
            "right_state": [float(v) for v in self.right_state],
            "birth_t": self.birth_t,
            "birth_x": self.birth_x,
            "parent_event": self.parent_event,
            "death_t": self.death_t,
            "death_x": self.death_x,
            "child_event": self.child_event,
            "perturbation": self.perturbation,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Front":
        return cls(
            id=int(data["id"]),
            family=int(data["family"]),
            kind=WaveKind(data["kind"]),
            strength=float(data["strength"]),
            speed=float(data["speed"]),
            left_state=np.asarray(data["left_state"], dtype=float),
            right_state=np.asarray(data["right_state"], dtype=float),
            birth_t=float(data["birth_t"]),
            birth_x=float(data["birth_x"]),
            parent_event=data.get("parent_event"),
            death_t=data.get("death_t"),
            death_x=data.get("death_x"),
            child_event=data.get("child_event"),
            perturbation=float(data.get("perturbation", 0.0)),
        )


def _family_total(pairs: StrengthPairs, family: int) -> float:
    return math.fsum(s for f, s in pairs if f == family)


@dataclass
class InteractionEvent:
    """
    Collision of exactly two adjacent fronts.

    ``incoming_strengths`` lists (family, sigma) of the left and the right incoming front,
    ``outgoing_strengths`` one pair per outgoing front from left to right. Fronts dropped
    for being numerically zero are kept in ``cancelled``.
    """

    id: int
    time: float
    position: float
    incoming: Tuple[int, int]
    outgoing: Tuple[int, ...]
    solver: SolverKind
    incoming_strengths: StrengthPairs
    outgoing_strengths: StrengthPairs
    non_physical: bool = False
    cancelled: StrengthPairs = ()
    notes: Tuple[str, ...] = ()

    def incoming_total(self, family: int) -> float:
        return _family_total(self.incoming_strengths, family)

    def outgoing_total(self, family: int) -> float:
        return _family_total(self.outgoing_strengths, family)

    def families(self) -> List[int]:
        return sorted({f for f, _ in self.incoming_strengths} | {f for f, _ in self.outgoing_strengths})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "t": self.time,
            "x": self.position,
            "incoming": list(self.incoming),
            "outgoing": list(self.outgoing),
            "solver": self.solver.value,
            "strengths": {
                "incoming": [[f, s] for f, s in self.incoming_strengths],
                "outgoing": [[f, s] for f, s in self.outgoing_strengths],
                "cancelled": [[f, s] for f, s in self.cancelled],
            },
            "non_physical": self.non_physical,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InteractionEvent":
        strengths = data.get("strengths", {})

        def pairs(key: str) -> StrengthPairs:
            return tuple((int(f), float(s)) for f, s in strengths.get(key, []))

        return cls(
            id=int(data["id"]),
            time=float(data["t"]),
            position=float(data["x"]),
            incoming=tuple(int(i) for i in data["incoming"]),
            outgoing=tuple(int(i) for i in data["outgoing"]),
            solver=SolverKind(data["solver"]),
            incoming_strengths=pairs("incoming"),
            outgoing_strengths=pairs("outgoing"),
            non_physical=bool(data.get("non_physical", False)),
            cancelled=pairs("cancelled"),
            notes=tuple(data.get("notes", [])),
        )


@dataclass
class RunLog:
    """Complete space-time history of one run; treated as read-only once ``run`` returns."""

    model: SystemModel
    params: RunParams
    left_state: np.ndarray
    right_state: np.ndarray
    fronts: Dict[int, Front]
    initial_ids: Tuple[int, ...]
    events: List[InteractionEvent] = field(default_factory=list)
    final_ids: Tuple[int, ...] = ()
    np_peak: float = 0.0
    alarms: List[str] = field(default_factory=list)
    _cache: Dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    @property
    def horizon(self) -> float:
        return self.params.horizon

    def front(self, front_id: int) -> Front:
        return self.fronts[front_id]

    def event(self, event_id: int) -> InteractionEvent:
        return self.events[event_id]

    @property
    def initial_fronts(self) -> List[Front]:
        return [self.fronts[i] for i in self.initial_ids]

    @property
    def final_fronts(self) -> List[Front]:
        return [self.fronts[i] for i in self.final_ids]

    def event_times(self) -> np.ndarray:
        if "event_times" not in self._cache:
            self._cache["event_times"] = np.array([e.time for e in self.events], dtype=float)
        return self._cache["event_times"]

    def physical_fronts(self, family: Optional[int] = None) -> Iterable[Front]:
        for front in self.fronts.values():
            if front.is_physical and (family is None or front.family == family):
                yield front

    def invalidate(self) -> None:
        self._cache.clear()

"""Finite signed atomic measures on the (t, x) half plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fronttrack.engine.records import INITIAL_NODE

ATOM_COLUMNS = ["t", "x", "weight", "event_id", "kind"]


@dataclass(frozen=True)
class Atom:
    t: float
    x: float
    weight: float
    event_id: int
    kind: str


class AtomicSpaceTimeMeasure:
    """
    Atoms (t, x, weight, event_id, kind) stored column-wise.

    ``event_id`` is ``-1`` for atoms sitting on the initial line rather than on an event.
    """

    def __init__(self, atoms: Iterable[Atom] = (), name: str = "") -> None:
        atoms = list(atoms)
        self.name = name
        self.t = np.array([a.t for a in atoms], dtype=float)
        self.x = np.array([a.x for a in atoms], dtype=float)
        self.weight = np.array([a.weight for a in atoms], dtype=float)
        self.event_id = np.array([a.event_id for a in atoms], dtype=int)
        self.kind = np.array([a.kind for a in atoms], dtype=object)

    @classmethod
    def _from_arrays(cls, name: str, t, x, weight, event_id, kind) -> "AtomicSpaceTimeMeasure":
        out = cls(name=name)
        out.t, out.x, out.weight, out.event_id, out.kind = t, x, weight, event_id, kind
        return out

    def __len__(self) -> int:
        return int(self.weight.size)

    def __iter__(self):
        for k in range(len(self)):
            yield Atom(float(self.t[k]), float(self.x[k]), float(self.weight[k]), int(self.event_id[k]), str(self.kind[k]))

    def __repr__(self) -> str:
        return f"AtomicSpaceTimeMeasure({self.name!r}, atoms={len(self)}, total={self.total():.6g})"

    # --- masses ---

    def total(self) -> float:
        return math.fsum(self.weight.tolist())

    def positive_mass(self) -> float:
        return math.fsum(self.weight[self.weight > 0.0].tolist())

    def negative_mass(self) -> float:
        return math.fsum((-self.weight[self.weight < 0.0]).tolist())

    def total_variation(self) -> float:
        return math.fsum(np.abs(self.weight).tolist())

    # --- restrictions ---

    def restrict_mask(self, mask: np.ndarray) -> "AtomicSpaceTimeMeasure":
        return self._from_arrays(self.name, self.t[mask], self.x[mask], self.weight[mask], self.event_id[mask], self.kind[mask])

    def restrict(
        self,
        t_range: Tuple[float, float] = (-math.inf, math.inf),
        x_range: Tuple[float, float] = (-math.inf, math.inf),
    ) -> "AtomicSpaceTimeMeasure":
        """Restriction to the closed rectangle t_range x x_range."""
        mask = (self.t >= t_range[0]) & (self.t <= t_range[1]) & (self.x >= x_range[0]) & (self.x <= x_range[1])
        return self.restrict_mask(mask)

    def restrict_events(self, event_ids: Iterable[int]) -> "AtomicSpaceTimeMeasure":
        return self.restrict_mask(np.isin(self.event_id, list(event_ids)))

    def positive_part(self) -> "AtomicSpaceTimeMeasure":
        return self._from_arrays(self.name + "+", self.t, self.x, np.maximum(self.weight, 0.0), self.event_id, self.kind)

    def absolute(self) -> "AtomicSpaceTimeMeasure":
        return self._from_arrays("|" + self.name + "|", self.t, self.x, np.abs(self.weight), self.event_id, self.kind)

    # --- lookups ---

    def by_event(self) -> Dict[int, float]:
        out: Dict[int, float] = {}
        for eid, w in zip(self.event_id.tolist(), self.weight.tolist()):
            if eid != INITIAL_NODE:
                out[eid] = out.get(eid, 0.0) + w
        return out

    def weight_at_event(self, event_id: int) -> float:
        return math.fsum(self.weight[self.event_id == event_id].tolist())

    def time_marginal(self) -> pd.Series:
        """Sum of weights per atom time, sorted by time."""
        if not len(self):
            return pd.Series(dtype=float, name=self.name)
        frame = pd.DataFrame({"t": self.t, "weight": self.weight})
        return frame.groupby("t", sort=True)["weight"].sum().rename(self.name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.t,
                "x": self.x,
                "weight": self.weight,
                "event_id": self.event_id,
                "kind": self.kind.astype(str),
            },
            columns=ATOM_COLUMNS,
        )

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, name: str = "") -> "AtomicSpaceTimeMeasure":
        return cls(
            (Atom(float(r.t), float(r.x), float(r.weight), int(r.event_id), str(r.kind)) for r in frame.itertuples(index=False)),
            name=name,
        )


def combine_atoms(
    name: str,
    parts: Sequence[Tuple[AtomicSpaceTimeMeasure, bool]],
    kind: Optional[str] = None,
) -> AtomicSpaceTimeMeasure:
    """
    Merge measures atom by atom on the key (t, x, event_id); each part is added as is or, with
    the flag set, by absolute value. Output is sorted by (t, x, event_id).
    """
    merged: Dict[Tuple[float, float, int], List[float]] = {}
    kinds: Dict[Tuple[float, float, int], str] = {}
    for measure, use_abs in parts:
        for atom in measure:
            key = (atom.t, atom.x, atom.event_id)
            merged.setdefault(key, []).append(abs(atom.weight) if use_abs else atom.weight)
            kinds.setdefault(key, kind or atom.kind)
    atoms = [Atom(t, x, math.fsum(ws), eid, kinds[(t, x, eid)]) for (t, x, eid), ws in sorted(merged.items())]
    return AtomicSpaceTimeMeasure(atoms, name=name)

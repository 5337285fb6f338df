"""Wave measures v_i(t) of one family and their split into jump and continuous parts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fronttrack.engine.queries import fronts_at, fronts_before, positions_at
from fronttrack.engine.records import Front, RunLog
from fronttrack.errors import JumpSetMissingError
from fronttrack.genealogy.paths import JumpSet
from fronttrack.measures.balance import wave_atom

Interval = Tuple[float, float]


class SignedAtomicMeasure1D:
    """
    Finite signed measure on the line made of point masses.

    Atoms at equal positions are merged, so ``x`` is strictly increasing. Masses of closed
    intervals and finite unions of disjoint closed intervals are exact sums.
    """

    def __init__(self, x: Sequence[float] = (), weight: Sequence[float] = (), name: str = "") -> None:
        x = np.asarray(x, dtype=float)
        weight = np.asarray(weight, dtype=float)
        if x.shape != weight.shape:
            raise ValueError("positions and weights must have the same length")
        order = np.argsort(x, kind="stable")
        x, weight = x[order], weight[order]
        self.name = name
        if x.size:
            self.x, starts = np.unique(x, return_index=True)
            self.weight = np.array([math.fsum(chunk) for chunk in np.split(weight, starts[1:])], dtype=float)
        else:
            self.x, self.weight = x, weight

    def __len__(self) -> int:
        return int(self.x.size)

    def __repr__(self) -> str:
        return f"SignedAtomicMeasure1D({self.name!r}, atoms={len(self)}, total={self.total():.6g})"

    def total(self) -> float:
        return math.fsum(self.weight.tolist())

    def positive_mass(self) -> float:
        return math.fsum(self.weight[self.weight > 0.0].tolist())

    def negative_mass(self) -> float:
        return math.fsum((-self.weight[self.weight < 0.0]).tolist())

    def _mask(self, intervals: Iterable[Interval]) -> np.ndarray:
        mask = np.zeros(self.x.shape, dtype=bool)
        for a, b in intervals:
            mask |= (self.x >= a) & (self.x <= b)
        return mask

    def mass(self, intervals: Iterable[Interval]) -> float:
        """Mass of a union of closed intervals (overlaps are counted once)."""
        return math.fsum(self.weight[self._mask(intervals)].tolist())

    def restrict(self, intervals: Iterable[Interval]) -> "SignedAtomicMeasure1D":
        mask = self._mask(intervals)
        return SignedAtomicMeasure1D(self.x[mask], self.weight[mask], name=self.name)

    def complement(self, intervals: Iterable[Interval]) -> "SignedAtomicMeasure1D":
        mask = ~self._mask(intervals)
        return SignedAtomicMeasure1D(self.x[mask], self.weight[mask], name=self.name)

    def positive_part(self) -> "SignedAtomicMeasure1D":
        keep = self.weight > 0.0
        return SignedAtomicMeasure1D(self.x[keep], self.weight[keep], name=self.name + "+")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "weight": self.weight})


@dataclass
class WaveMeasures:
    """v_i at one time together with its jump/continuous split when a jump set was supplied."""

    time: float
    family: int
    v: SignedAtomicMeasure1D
    _jump: Optional[SignedAtomicMeasure1D] = None
    _cont: Optional[SignedAtomicMeasure1D] = None

    @property
    def jump(self) -> SignedAtomicMeasure1D:
        if self._jump is None:
            raise JumpSetMissingError(f"no jump set given for family {self.family} at t={self.time:g}")
        return self._jump

    @property
    def cont(self) -> SignedAtomicMeasure1D:
        if self._cont is None:
            raise JumpSetMissingError(f"no jump set given for family {self.family} at t={self.time:g}")
        return self._cont

    @property
    def has_split(self) -> bool:
        return self._jump is not None


def _build(fronts: List[Front], log: RunLog, t: float, family: int, jumps: Optional[JumpSet]) -> WaveMeasures:
    x = positions_at(fronts, t)
    w = np.array([wave_atom(log, f, family) for f in fronts], dtype=float)
    v = SignedAtomicMeasure1D(x, w, name=f"v_{family}")
    if jumps is None:
        return WaveMeasures(t, family, v)
    if jumps.family != family:
        raise JumpSetMissingError(f"jump set is for family {jumps.family}, not {family}")
    in_jump = np.array([f.id in jumps for f in fronts], dtype=bool)
    jump = SignedAtomicMeasure1D(x[in_jump], w[in_jump], name=f"v_{family}_jump")
    cont = SignedAtomicMeasure1D(x[~in_jump], w[~in_jump], name=f"v_{family}_cont")
    return WaveMeasures(t, family, v, jump, cont)


def _check_time(log: RunLog, t: float) -> None:
    if not 0.0 <= t <= log.horizon:
        raise ValueError(f"t={t:g} outside [0, {log.horizon:g}]")


def wave_measure_at(log: RunLog, t: float, family: int, jumps: Optional[JumpSet] = None) -> WaveMeasures:
    """v_i(t), right-continuous in t; ``jump``/``cont`` need a jump set of the same family."""
    _check_time(log, t)
    return _build(fronts_at(log, t), log, t, family, jumps)


def wave_measure_before(log: RunLog, t: float, family: int, jumps: Optional[JumpSet] = None) -> WaveMeasures:
    """Left limit v_i(t-)."""
    _check_time(log, t)
    return _build(fronts_before(log, t), log, t, family, jumps)

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np


class WaveKind(str, Enum):
    SHOCK = "shock"
    RAREFACTION_FAN = "rarefaction_fan"
    CONTACT = "contact"
    NON_PHYSICAL = "non_physical"


class SolverKind(str, Enum):
    ACCURATE = "accurate"
    SIMPLIFIED = "simplified"


@dataclass(frozen=True, eq=False)
class SubJump:
    """A single jump of a discretized rarefaction fan."""

    left_state: np.ndarray
    right_state: np.ndarray
    strength: float
    speed: float


@dataclass(frozen=True, eq=False)
class Wave:
    family: int
    kind: WaveKind
    strength: float
    speed: float
    left_state: np.ndarray
    right_state: np.ndarray
    sub_jumps: Tuple[SubJump, ...] = ()

    @property
    def is_physical(self) -> bool:
        return self.kind is not WaveKind.NON_PHYSICAL

    @property
    def speeds(self) -> List[float]:
        if self.sub_jumps:
            return [j.speed for j in self.sub_jumps]
        return [self.speed]

    def jumps(self) -> List[SubJump]:
        """The wave as a list of jumps, one per front it will occupy."""
        if self.sub_jumps:
            return list(self.sub_jumps)
        return [SubJump(self.left_state, self.right_state, self.strength, self.speed)]


@dataclass(frozen=True, eq=False)
class WaveFan:
    """
    Waves solving one Riemann problem, ordered by family.

    ``intermediate_states`` holds omega_0 = u_l, ..., omega_N; a non-physical wave, when
    present, closes the gap from omega_N to the right state.
    """

    waves: Tuple[Wave, ...]
    intermediate_states: np.ndarray
    strengths: np.ndarray
    solver: SolverKind = SolverKind.ACCURATE
    iterations: int = 0
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def left_state(self) -> np.ndarray:
        return self.intermediate_states[0]

    @property
    def physical_waves(self) -> List[Wave]:
        return [w for w in self.waves if w.is_physical]

    @property
    def non_physical(self) -> Wave | None:
        for w in self.waves:
            if not w.is_physical:
                return w
        return None

    def wave(self, family: int) -> Wave | None:
        for w in self.waves:
            if w.family == family:
                return w
        return None

    def all_speeds(self) -> List[float]:
        return [s for w in self.waves for s in w.speeds]

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from fronttrack.engine.records import RunLog
from fronttrack.riemann.waves import WaveKind

RH_TOLERANCE = 1e-10


@dataclass(frozen=True)
class FrontDefect:
    front_id: int
    family: int
    kind: WaveKind
    defect: float
    allowed: float
    informational: bool

    @property
    def passed(self) -> bool:
        return self.informational or self.defect <= self.allowed


def rh_defects(log: RunLog) -> List[FrontDefect]:
    """
    Rankine-Hugoniot defect |f(u+) - f(u-) - s (u+ - u-)| of every physical front.

    A speed perturbation of size d adds at most d |u+ - u-| to the defect. Rarefaction jumps
    of systems follow the integral curve and only satisfy the jump relation approximately, so
    they are reported but never counted as failures.
    """
    model = log.model
    out: List[FrontDefect] = []
    for fid in sorted(log.fronts):
        front = log.fronts[fid]
        if not front.is_physical:
            continue
        jump = front.right_state - front.left_state
        defect = float(np.max(np.abs(model.flux(front.right_state) - model.flux(front.left_state) - front.speed * jump)))
        allowed = abs(front.perturbation) * float(np.max(np.abs(jump))) + RH_TOLERANCE
        informational = front.kind is WaveKind.RAREFACTION_FAN and not model.is_scalar
        out.append(FrontDefect(fid, front.family, front.kind, defect, allowed, informational))
    return out

"""
Simplified Riemann solver: outgoing physical waves keep the sizes of the incoming ones and the
leftover state mismatch travels as one non-physical front faster than every characteristic.
"""

from __future__ import annotations

from collections import OrderedDict
from typing import Sequence, Tuple

import numpy as np

from fronttrack.model.curves import wave_curve_point
from fronttrack.model.eigen import np_speed
from fronttrack.model.systems import SystemModel
from fronttrack.riemann.solver import ZERO_STRENGTH, build_wave
from fronttrack.riemann.waves import SolverKind, Wave, WaveFan, WaveKind


def solve_simplified(
    model: SystemModel,
    u_l: np.ndarray,
    u_r: np.ndarray,
    incoming: Sequence[Tuple[int, float]],
) -> WaveFan:
    """
    ``incoming`` lists (family, strength) of the colliding fronts from left to right; a family
    of ``model.np_family`` marks a non-physical front, whose size is not propagated.

    Same-family physical strengths add up; distinct families cross unchanged and are emitted
    in increasing family order.
    """
    u_l = np.asarray(u_l, dtype=float)
    u_r = np.asarray(u_r, dtype=float)

    merged: "OrderedDict[int, float]" = OrderedDict()
    for family, strength in sorted(incoming, key=lambda item: item[0]):
        if family > model.n_eqs:
            continue
        merged[family] = merged.get(family, 0.0) + strength

    strengths = np.zeros(model.n_eqs)
    states = np.empty((model.n_eqs + 1, model.n_eqs))
    states[0] = u_l
    waves = []
    current = u_l
    for family in range(1, model.n_eqs + 1):
        sigma = merged.get(family, 0.0)
        if abs(sigma) >= ZERO_STRENGTH:
            nxt = wave_curve_point(model, current, family, sigma)
            waves.append(build_wave(model, family, sigma, current, nxt))
            strengths[family - 1] = sigma
            current = nxt
        states[family] = current

    mismatch = u_r - current
    size = float(np.linalg.norm(mismatch))
    notes: Tuple[str, ...] = ()
    if size > 0.0:
        waves.append(
            Wave(
                family=model.np_family,
                kind=WaveKind.NON_PHYSICAL,
                strength=size,
                speed=np_speed(model),
                left_state=current,
                right_state=u_r,
            )
        )
    else:
        notes = ("no non-physical remainder",)

    return WaveFan(
        waves=tuple(waves),
        intermediate_states=states,
        strengths=strengths,
        solver=SolverKind.SIMPLIFIED,
        notes=notes,
    )

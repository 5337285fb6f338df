from __future__ import annotations

from typing import Tuple

from fronttrack.engine.records import RunLog
from fronttrack.measures.atomic import Atom, AtomicSpaceTimeMeasure


def interaction_amounts(family_l: int, sigma_l: float, family_r: int, sigma_r: float) -> Tuple[float, float]:
    """(|s' s''|, |s' s''| + cancellation), the cancellation term only between equal families."""
    product = abs(sigma_l * sigma_r)
    cancellation = abs(sigma_l) + abs(sigma_r) - abs(sigma_l + sigma_r) if family_l == family_r else 0.0
    return product, product + cancellation


def interaction_measures(log: RunLog) -> Tuple[AtomicSpaceTimeMeasure, AtomicSpaceTimeMeasure]:
    """
    Interaction and interaction-cancellation measures, one atom per event of two physical fronts.

    Events involving a non-physical front carry no atom.
    """
    mu_i, mu_ic = [], []
    for event in log.events:
        if event.non_physical:
            continue
        (f_l, s_l), (f_r, s_r) = event.incoming_strengths
        interaction, with_cancellation = interaction_amounts(f_l, s_l, f_r, s_r)
        mu_i.append(Atom(event.time, event.position, interaction, event.id, "interaction"))
        mu_ic.append(Atom(event.time, event.position, with_cancellation, event.id, "interaction_cancellation"))
    return AtomicSpaceTimeMeasure(mu_i, name="mu_I"), AtomicSpaceTimeMeasure(mu_ic, name="mu_IC")

"""Initial data: piecewise-constant datums, sampling of functions, and the initial fronts."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from fronttrack.engine.records import Front
from fronttrack.errors import ConfigError, TVTooLargeError
from fronttrack.model.systems import SystemModel, as_state
from fronttrack.riemann.solver import ZERO_STRENGTH, solve_riemann

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RiemannDatum:
    left: np.ndarray
    right: np.ndarray
    x: float = 0.0


@dataclass(frozen=True, eq=False)
class StepsDatum:
    """``states[k]`` holds on [breakpoints[k-1], breakpoints[k]) with open ends at +-infinity."""

    breakpoints: Tuple[float, ...]
    states: Tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class SampledDatum:
    function: Callable[[float], object]
    cells: int
    domain: Tuple[float, float]
    expression: Optional[str] = None


Datum = Union[RiemannDatum, StepsDatum, SampledDatum]


@dataclass(frozen=True, eq=False)
class InitialData:
    fronts: Tuple[Front, ...]
    left_state: np.ndarray
    right_state: np.ndarray
    breakpoints: Tuple[float, ...]
    states: Tuple[np.ndarray, ...]

    @property
    def total_variation(self) -> float:
        return step_variation(self.states)


def step_variation(states: Sequence[np.ndarray]) -> float:
    return math.fsum(float(np.linalg.norm(b - a)) for a, b in zip(states[:-1], states[1:]))


def to_steps(model: SystemModel, datum: Datum) -> Tuple[List[float], List[np.ndarray]]:
    """Breakpoints and the states between them, with zero jumps removed."""
    if isinstance(datum, RiemannDatum):
        breakpoints = [float(datum.x)]
        states = [as_state(datum.left, model.n_eqs), as_state(datum.right, model.n_eqs)]
    elif isinstance(datum, StepsDatum):
        if len(datum.states) != len(datum.breakpoints) + 1:
            raise ConfigError("a steps datum needs one more state than breakpoints")
        if any(b <= a for a, b in zip(datum.breakpoints[:-1], datum.breakpoints[1:])):
            raise ConfigError("steps breakpoints must be strictly increasing")
        breakpoints = [float(b) for b in datum.breakpoints]
        states = [as_state(s, model.n_eqs) for s in datum.states]
    elif isinstance(datum, SampledDatum):
        a, b = float(datum.domain[0]), float(datum.domain[1])
        if datum.cells < 1 or not b > a:
            raise ConfigError("a sampled datum needs cells >= 1 and a non-empty domain")
        h = (b - a) / datum.cells
        nodes = [a + k * h for k in range(datum.cells)] + [b]
        # far left takes u0(a - h), cell k takes u0(x_k), far right takes u0(b)
        states = [as_state(datum.function(a - h), model.n_eqs)]
        states += [as_state(datum.function(x), model.n_eqs) for x in nodes]
        breakpoints = nodes
    else:
        raise ConfigError(f"unsupported datum {type(datum).__name__}")

    kept_breaks: List[float] = []
    kept_states: List[np.ndarray] = [states[0]]
    for x, state in zip(breakpoints, states[1:]):
        if np.array_equal(state, kept_states[-1]):
            continue
        kept_breaks.append(x)
        kept_states.append(state)
    return kept_breaks, kept_states


def sample_initial_datum(
    model: SystemModel,
    datum: Datum,
    nu: float,
    tv_guard: Optional[float] = None,
) -> InitialData:
    """
    Approximate the datum by a step function and solve the Riemann problem at every jump,
    with rarefactions split into fronts of strength at most ``nu``.
    """
    breakpoints, states = to_steps(model, datum)
    limit = model.tv_limit if tv_guard is None else tv_guard
    tv = step_variation(states)
    if tv > limit:
        raise TVTooLargeError(f"{model.name}: total variation {tv:.6g} of the initial step function exceeds {limit:.6g}")

    fronts: List[Front] = []
    for x, u_l, u_r in zip(breakpoints, states[:-1], states[1:]):
        fan = solve_riemann(model, u_l, u_r, nu=nu)
        for wave in fan.waves:
            for jump in wave.jumps():
                if abs(jump.strength) < ZERO_STRENGTH:
                    continue
                fronts.append(
                    Front(
                        id=len(fronts),
                        family=wave.family,
                        kind=wave.kind,
                        strength=float(jump.strength),
                        speed=float(jump.speed),
                        left_state=jump.left_state,
                        right_state=jump.right_state,
                        birth_t=0.0,
                        birth_x=float(x),
                    )
                )

    logger.info("%s: %d jumps sampled into %d initial fronts (TV %.6g)", model.name, len(breakpoints), len(fronts), tv)
    return InitialData(
        fronts=tuple(fronts),
        left_state=states[0],
        right_state=states[-1],
        breakpoints=tuple(breakpoints),
        states=tuple(states),
    )

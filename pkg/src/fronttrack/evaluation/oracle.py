"""
Independent reference for scalar convex conservation laws: the Lax-Oleinik formula

    u(t, x) = (f')^-1((x - y*) / t),   y* minimizing U0(y) + t f*((x - y) / t)

with U0 a primitive of the datum and f* the Legendre transform of f restricted to the box,
evaluated on a uniform grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import linregress

from fronttrack.engine.initial import Datum, SampledDatum, sample_initial_datum, to_steps
from fronttrack.engine.params import RunParams
from fronttrack.engine.queries import fronts_at, positions_at
from fronttrack.engine.records import RunLog
from fronttrack.engine.tracking import run
from fronttrack.errors import NotScalarError
from fronttrack.model.systems import SystemModel, burgers

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4096
TABLE_SIZE = 20001
CHUNK_ROWS = 256
OLEINIK_TOLERANCE = 1e-9
CONE_PAD = 0.5


@dataclass(frozen=True)
class _FluxTable:
    """u, lambda = f'(u) and f*(lambda) on a fine grid of the box."""

    u: np.ndarray
    lam: np.ndarray
    conjugate: np.ndarray

    def legendre(self, p: np.ndarray) -> np.ndarray:
        out = np.interp(p, self.lam, self.conjugate)
        # the box caps u, so f* grows linearly past the extreme speeds
        low, high = p < self.lam[0], p > self.lam[-1]
        out[low] = self.conjugate[0] + self.u[0] * (p[low] - self.lam[0])
        out[high] = self.conjugate[-1] + self.u[-1] * (p[high] - self.lam[-1])
        return out

    def state(self, lam: np.ndarray) -> np.ndarray:
        return np.interp(lam, self.lam, self.u)

    def speed(self, u: np.ndarray) -> np.ndarray:
        return np.interp(u, self.u, self.lam)


def _flux_table(model: SystemModel) -> _FluxTable:
    if not model.is_scalar:
        raise NotScalarError(f"{model.name} has {model.n_eqs} components; the oracle needs a scalar law")
    u = np.linspace(float(model.box_low[0]), float(model.box_high[0]), TABLE_SIZE)
    lam = np.array([float(model.jacobian(np.array([v]))[0, 0]) for v in u])
    if np.any(np.diff(lam) <= 0.0):
        raise ValueError(f"{model.name}: flux is not strictly convex on the box")
    flux = np.array([float(model.flux(np.array([v]))[0]) for v in u])
    return _FluxTable(u=u, lam=lam, conjugate=lam * u - flux)


def _scalar(value: object) -> float:
    return float(np.asarray(value, dtype=float).reshape(-1)[0])


class _Primitive:
    """U0(y) = integral of the datum from the first breakpoint (or domain start) to y."""

    def __init__(self, model: SystemModel, datum: Datum) -> None:
        self.function: Optional[Callable[[float], object]] = None
        if isinstance(datum, SampledDatum):
            self.function = datum.function
            self.support = (float(datum.domain[0]), float(datum.domain[1]))
            self.breakpoints: Tuple[float, ...] = ()
            self.values = np.array([_scalar(datum.function(x)) for x in np.linspace(*self.support, 257)])
            return
        breakpoints, states = to_steps(model, datum)
        self.breakpoints = tuple(breakpoints)
        self.states = np.array([s[0] for s in states], dtype=float)
        self.values = self.states
        origin = breakpoints[0] if breakpoints else 0.0
        self.support = (origin, breakpoints[-1] if breakpoints else 0.0)
        widths = np.diff(np.asarray(breakpoints, dtype=float))
        self.knot_values = np.concatenate(([0.0], np.cumsum(self.states[1:-1] * widths)))

    def __call__(self, y: np.ndarray) -> np.ndarray:
        if self.function is not None:
            # outside its domain a sampled datum is constant, as in the tracked run
            a, b = self.support
            u0 = np.array([_scalar(self.function(v)) for v in np.clip(y, a, b)])
            return cumulative_trapezoid(u0, y, initial=0.0)
        if not self.breakpoints:
            return self.states[0] * y
        knots = np.asarray(self.breakpoints)
        k = np.searchsorted(knots, y, side="right")
        base = np.where(k == 0, 0.0, self.knot_values[np.maximum(k - 1, 0)])
        anchor = knots[np.maximum(k - 1, 0)]
        return base + self.states[k] * (y - anchor)


@dataclass(frozen=True)
class OracleSolution:
    t: float
    x: np.ndarray
    u: np.ndarray
    lam: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def shocks(self, amplitude: Optional[float] = None) -> List[Tuple[float, float]]:
        """(location, jump) of every downward jump between neighbours larger than ``amplitude``."""
        if amplitude is None:
            amplitude = max(1e-6, 0.1 * float(self.u.max() - self.u.min()))
        drops = np.diff(self.u)
        hits = np.flatnonzero(drops < -amplitude)
        out: List[Tuple[float, float]] = []
        for group in np.split(hits, np.flatnonzero(np.diff(hits) > 1) + 1):
            if not group.size:
                continue
            k = int(group[np.argmin(drops[group])])
            out.append((0.5 * float(self.x[k] + self.x[k + 1]), float(drops[group].sum())))
        return out

    def oleinik_ratio(self) -> float:
        """t max d(lambda)/dx on grid differences; the entropy solution keeps it <= 1."""
        return self.t * float(np.max(np.diff(self.lam))) / self.dx

    def satisfies_oleinik(self) -> bool:
        return self.oleinik_ratio() <= 1.0 + OLEINIK_TOLERANCE


def _grids(primitive: _Primitive, table: _FluxTable, t: float, grid: int) -> Tuple[np.ndarray, np.ndarray]:
    speeds = table.speed(np.clip(primitive.values, table.u[0], table.u[-1]))
    cone = float(np.max(np.abs(speeds))) * t
    lo, hi = primitive.support
    x = np.linspace(lo - cone - CONE_PAD, hi + cone + CONE_PAD, grid)
    y = np.linspace(x[0] - cone, x[-1] + cone, grid)
    # datum kinks sit exactly on the y grid so that centred fans come out exact
    y = np.union1d(y, np.asarray(primitive.breakpoints, dtype=float))
    return x, y


def oracle_solution(model: SystemModel, datum: Datum, t: float, grid: int = DEFAULT_GRID) -> OracleSolution:
    """Entropy solution at time t on ``grid`` points covering the datum's support plus the wave cone."""
    if t <= 0.0:
        raise ValueError("the oracle needs t > 0")
    table = _flux_table(model)
    primitive = _Primitive(model, datum)
    x, y = _grids(primitive, table, t, grid)
    u0_primitive = primitive(y)

    minimizer = np.empty_like(x)
    for start in range(0, x.size, CHUNK_ROWS):
        rows = x[start : start + CHUNK_ROWS]
        p = (rows[:, None] - y[None, :]) / t
        cost = u0_primitive[None, :] + t * table.legendre(p.ravel()).reshape(p.shape)
        minimizer[start : start + rows.size] = y[np.argmin(cost, axis=1)]

    lam = np.clip((x - minimizer) / t, table.lam[0], table.lam[-1])
    solution = OracleSolution(t=t, x=x, u=table.state(lam), lam=lam)
    logger.debug("oracle at t=%g on %d points: %d shock(s)", t, grid, len(solution.shocks()))
    return solution


def oracle_burgers(datum: Datum, t: float, grid: int = DEFAULT_GRID) -> OracleSolution:
    return oracle_solution(burgers(), datum, t, grid)


def sample_run(log: RunLog, t: float, x: np.ndarray) -> np.ndarray:
    """Front-tracking values at (t, x) for every x, right-continuous."""
    fronts = fronts_at(log, t)
    if not fronts:
        return np.full(x.shape, float(log.left_state[0]))
    positions = positions_at(fronts, t)
    states = np.array([float(fronts[0].left_state[0])] + [float(f.right_state[0]) for f in fronts])
    return states[np.searchsorted(positions, x, side="right")]


def l1_error(log: RunLog, solution: OracleSolution) -> float:
    diff = np.abs(sample_run(log, solution.t, solution.x) - solution.u)
    return math.fsum(diff.tolist()) * solution.dx


@dataclass
class ConvergenceReport:
    nus: Tuple[float, ...]
    errors: Tuple[float, ...]
    order: float
    min_order: float

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors[:-1], self.errors[1:]))

    @property
    def passed(self) -> bool:
        return self.decreasing and self.order >= self.min_order

    def to_dict(self) -> dict:
        return {
            "nus": list(self.nus),
            "errors": list(self.errors),
            "order": self.order,
            "decreasing": self.decreasing,
            "min_order": self.min_order,
            "passed": self.passed,
        }


def empirical_order(nus: Sequence[float], errors: Sequence[float]) -> float:
    if any(e <= 0.0 for e in errors):
        return math.inf
    return float(linregress(np.log(nus), np.log(errors)).slope)


def convergence_study(
    model: SystemModel,
    datum: Datum,
    params: Sequence[RunParams],
    t: float,
    grid: int = DEFAULT_GRID,
    min_order: float = 0.8,
) -> ConvergenceReport:
    """L1 distance to the oracle at time t for runs with decreasing nu."""
    solution = oracle_solution(model, datum, t, grid)
    nus, errors = [], []
    for p in sorted(params, key=lambda p: -p.nu):
        if p.horizon < t:
            raise ValueError(f"run horizon {p.horizon:g} ends before t={t:g}")
        log = run(model, p, sample_initial_datum(model, datum, p.nu, p.tv_guard))
        nus.append(p.nu)
        errors.append(l1_error(log, solution))
        logger.info("oracle: nu=%g, L1 error %.4e", p.nu, errors[-1])
    report = ConvergenceReport(tuple(nus), tuple(errors), empirical_order(nus, errors), min_order)
    logger.info("oracle: empirical order %.3f over nu=%s", report.order, list(nus))
    return report


def refinement_shift(model: SystemModel, datum: Datum, t: float, grid: int = DEFAULT_GRID) -> Tuple[float, float]:
    """
    Largest move of a shock location when the grid is doubled, and the coarse spacing.

    Shocks are matched nearest first; a shock present on only one grid counts as an infinite move.
    """
    coarse = oracle_solution(model, datum, t, grid)
    fine = oracle_solution(model, datum, t, 2 * grid)
    a = [x for x, _ in coarse.shocks()]
    b = [x for x, _ in fine.shocks()]
    if len(a) != len(b):
        return math.inf, coarse.dx
    shift = max((abs(p - q) for p, q in zip(sorted(a), sorted(b))), default=0.0)
    return shift, coarse.dx


def breaking_time(model: SystemModel, datum: SampledDatum, samples: int = 20001) -> float:
    """-1 / min d(lambda(u0))/dx, the first time characteristics of a smooth datum cross."""
    table = _flux_table(model)
    x = np.linspace(*datum.domain, samples)
    lam0 = table.speed(np.array([_scalar(datum.function(v)) for v in x]))
    slope = float(np.min(np.gradient(lam0, x)))
    return math.inf if slope >= 0.0 else -1.0 / slope


def first_shock_time(
    model: SystemModel,
    datum: Datum,
    t_low: float,
    t_high: float,
    amplitude: float,
    grid: int = DEFAULT_GRID,
    tolerance: float = 1e-3,
) -> float:
    """Bisection on the oracle for the first time a jump larger than ``amplitude`` appears."""

    def shocked(t: float) -> bool:
        return bool(oracle_solution(model, datum, t, grid).shocks(amplitude))

    if shocked(t_low) or not shocked(t_high):
        raise ValueError(f"no shock onset inside [{t_low:g}, {t_high:g}]")
    while t_high - t_low > tolerance:
        mid = 0.5 * (t_low + t_high)
        if shocked(mid):
            t_high = mid
        else:
            t_low = mid
    return 0.5 * (t_low + t_high)

"""
Riemann problems by inversion of the composite wave-curve map

    Lambda(sigma)(u_l) = Psi_N(sigma_N) o ... o Psi_1(sigma_1)(u_l) = u_r.
"""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from fronttrack.errors import FrontTrackError, NoConvergenceError, OutOfDomainError
from fronttrack.model.averaging import averaged_speed
from fronttrack.model.curves import lax_composite, rarefaction_point
from fronttrack.model.eigen import eigen_at
from fronttrack.model.systems import SystemModel
from fronttrack.riemann.waves import SolverKind, SubJump, Wave, WaveFan, WaveKind

logger = logging.getLogger(__name__)

ZERO_STRENGTH = 1e-14
LAMBDA_TOLERANCE = 1e-12
MAX_ITERATIONS = 50
MAX_HALVINGS = 8
FD_STEP = 1e-7


def classify(model: SystemModel, family: int, strength: float) -> WaveKind:
    if not model.is_genuinely_nonlinear(family):
        return WaveKind.CONTACT
    return WaveKind.SHOCK if strength < 0.0 else WaveKind.RAREFACTION_FAN


def build_wave(
    model: SystemModel,
    family: int,
    strength: float,
    left: np.ndarray,
    right: np.ndarray,
    nu: Optional[float] = None,
) -> Wave:
    kind = classify(model, family, strength)
    wave = Wave(
        family=family,
        kind=kind,
        strength=strength,
        speed=averaged_speed(model, left, right, family),
        left_state=left,
        right_state=right,
    )
    if kind is WaveKind.RAREFACTION_FAN and nu is not None:
        return Wave(
            family=family,
            kind=kind,
            strength=strength,
            speed=wave.speed,
            left_state=left,
            right_state=right,
            sub_jumps=tuple(discretize_rarefaction(model, wave, nu)),
        )
    return wave


def sub_jump_count(strength: float, nu: float) -> int:
    # tolerance keeps exact multiples (1.0 / 0.25) from rounding up
    return max(1, math.ceil(strength / nu - 1e-12))


def discretize_rarefaction(model: SystemModel, wave: Wave, nu: float) -> List[SubJump]:
    """Split a rarefaction fan into ceil(sigma/nu) equal-strength jumps travelling at mean speed."""
    if wave.kind is not WaveKind.RAREFACTION_FAN:
        raise ValueError(f"cannot discretize a {wave.kind.value} wave")
    if nu <= 0.0:
        raise ValueError("nu must be positive")

    count = sub_jump_count(wave.strength, nu)
    piece = wave.strength / count

    jumps: List[SubJump] = []
    left = wave.left_state
    for h in range(1, count + 1):
        # last state is pinned to the fan's right state so the jumps tile the wave exactly
        right = wave.right_state if h == count else rarefaction_point(model, left, wave.family, piece)
        jumps.append(SubJump(left, right, piece, averaged_speed(model, left, right, wave.family)))
        left = right
    return jumps


def _assemble(
    model: SystemModel,
    states: np.ndarray,
    strengths: np.ndarray,
    nu: Optional[float],
    iterations: int,
) -> WaveFan:
    states = states.copy()
    u_r = states[-1].copy()
    active = [i for i in range(1, model.n_eqs + 1) if abs(float(strengths[i - 1])) >= ZERO_STRENGTH]
    for i in range(1, model.n_eqs + 1):
        if i not in active:
            states[i] = states[i - 1]
    # pin the closing state so adjacent fronts share bit-identical states
    if active:
        states[active[-1]:] = u_r

    waves = []
    for i in active:
        waves.append(build_wave(model, i, float(strengths[i - 1]), states[i - 1], states[i], nu))
    return WaveFan(
        waves=tuple(waves),
        intermediate_states=states,
        strengths=strengths,
        solver=SolverKind.ACCURATE,
        iterations=iterations,
    )


def _solve_scalar(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    left = eigen_at(model, u_l)
    if model.is_genuinely_nonlinear(1):
        # both branches are parameterized by the jump of lambda
        return np.array([eigen_at(model, u_r).eigenvalue(1) - left.eigenvalue(1)])
    return left.left @ (u_r - u_l)


def _residual(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    states = lax_composite(model, u_l, sigma)
    return states[-1] - u_r, states


def _fd_jacobian(model: SystemModel, u_l: np.ndarray, sigma: np.ndarray, base: np.ndarray) -> np.ndarray:
    jac = np.empty((model.n_eqs, model.n_eqs))
    for j in range(model.n_eqs):
        shifted = sigma.copy()
        shifted[j] += FD_STEP
        jac[:, j] = (lax_composite(model, u_l, shifted)[-1] - base) / FD_STEP
    return jac


def invert_lax_map(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Quasi-Newton solve of Lambda(sigma)(u_l) = u_r.

    The Jacobian estimate starts from [r_1 | ... | r_N](u_l), the derivative at sigma = 0, and
    is refined by Broyden updates; a step that increases the residual is halved.

    Returns (sigma, intermediate states, iterations).
    """
    structure = eigen_at(model, u_l)
    sigma = structure.left @ (u_r - u_l)
    jac = structure.right.copy()

    residual, states = _residual(model, u_l, u_r, sigma)
    norm = float(np.max(np.abs(residual)))

    for iteration in range(1, MAX_ITERATIONS + 1):
        if norm <= LAMBDA_TOLERANCE:
            return sigma, states, iteration - 1

        try:
            step = np.linalg.solve(jac, -residual)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(f"{model.name}: singular wave-curve Jacobian") from exc

        accepted = False
        for halving in range(MAX_HALVINGS + 1):
            trial = sigma + step
            try:
                trial_residual, trial_states = _residual(model, u_l, u_r, trial)
            except OutOfDomainError:
                step = 0.5 * step
                continue
            trial_norm = float(np.max(np.abs(trial_residual)))
            if trial_norm < norm or trial_norm <= LAMBDA_TOLERANCE:
                accepted = True
                break
            if halving == 0:
                logger.debug("damping Lambda step at iteration %d (%.3e -> %.3e)", iteration, norm, trial_norm)
            step = 0.5 * step

        if not accepted:
            # quasi-Newton model is off: rebuild it by finite differences and retry
            jac = _fd_jacobian(model, u_l, sigma, residual + u_r)
            continue

        delta_residual = trial_residual - residual
        jac = jac + np.outer(delta_residual - jac @ step, step) / float(np.dot(step, step))
        sigma, residual, states, norm = trial, trial_residual, trial_states, trial_norm

    if norm <= LAMBDA_TOLERANCE:
        return sigma, states, MAX_ITERATIONS
    raise NoConvergenceError(
        f"{model.name}: Lambda inversion stalled at residual {norm:.3e} for {u_l.tolist()} -> {u_r.tolist()}"
    )


def solve_riemann(
    model: SystemModel,
    u_l: np.ndarray,
    u_r: np.ndarray,
    nu: Optional[float] = None,
) -> WaveFan:
    """
    Self-similar solution of the Riemann problem (u_l, u_r) as a fan of elementary waves.

    With ``nu`` the rarefaction fans come already split into front-tracking jumps.
    """
    u_l = np.asarray(u_l, dtype=float)
    u_r = np.asarray(u_r, dtype=float)
    for u in (u_l, u_r):
        if not model.in_box(u):
            raise OutOfDomainError(f"{model.name}: Riemann state {u.tolist()} outside the box")

    if model.is_scalar:
        strengths = _solve_scalar(model, u_l, u_r)
        states = np.vstack([u_l, u_r])
        return _assemble(model, states, strengths, nu, iterations=0)

    try:
        strengths, states, iterations = invert_lax_map(model, u_l, u_r)
    except FrontTrackError:
        logger.debug("Riemann solve failed for %s -> %s", u_l.tolist(), u_r.tolist())
        raise
    states = states.copy()
    states[-1] = u_r
    return _assemble(model, states, strengths, nu, iterations)

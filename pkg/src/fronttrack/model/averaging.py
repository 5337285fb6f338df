"""Averaged quantities along the segment between two states (7-point Gauss-Legendre)."""

from typing import Tuple

import numpy as np
import scipy.linalg

from fronttrack.errors import NonHyperbolicError, OutOfDomainError
from fronttrack.model.eigen import IMAG_TOLERANCE, eigen_at
from fronttrack.model.systems import SystemModel

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(7)
THETA: np.ndarray = 0.5 * (_NODES + 1.0)
WEIGHTS: np.ndarray = 0.5 * _WEIGHTS


def _check_segment(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> None:
    # the box is convex, so both endpoints inside means the whole segment is
    if not (model.in_box(u_l) and model.in_box(u_r)):
        raise OutOfDomainError(
            f"{model.name}: segment [{u_l.tolist()}, {u_r.tolist()}] leaves the admissible box"
        )


def segment_points(u_l: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    return np.outer(THETA, u_r) + np.outer(1.0 - THETA, u_l)


def averaged_matrix(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    """Integral of A(theta*u_r + (1-theta)*u_l) over theta in [0, 1]."""
    _check_segment(model, u_l, u_r)
    total = np.zeros((model.n_eqs, model.n_eqs))
    for w, point in zip(WEIGHTS, segment_points(u_l, u_r)):
        total += w * model.jacobian(point)
    return total


def averaged_eigenvalues(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    matrix = averaged_matrix(model, u_l, u_r)
    if model.n_eqs == 1:
        return matrix[0].copy()
    values = scipy.linalg.eigvals(matrix)
    if np.any(np.abs(values.imag) > IMAG_TOLERANCE * max(1.0, float(np.max(np.abs(values.real))))):
        raise NonHyperbolicError(f"{model.name}: averaged matrix has complex eigenvalues")
    return np.sort(values.real)


def averaged_speed(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray, family: int) -> float:
    """i-th eigenvalue of the averaged matrix: Rankine-Hugoniot speed on shocks, mean speed on sub-jumps."""
    return float(averaged_eigenvalues(model, u_l, u_r)[family - 1])


def averaged_left_vectors(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    """Rows are the segment averages of the normalized left eigenvectors."""
    _check_segment(model, u_l, u_r)
    total = np.zeros((model.n_eqs, model.n_eqs))
    for w, point in zip(WEIGHTS, segment_points(u_l, u_r)):
        total += w * eigen_at(model, point).left
    return total


def projected_strengths(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    """Components l_i(u_l, u_r) . (u_r - u_l) for every family."""
    return averaged_left_vectors(model, u_l, u_r) @ (u_r - u_l)


def rh_residual(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray, speed: float) -> float:
    """Max-norm of f(u_r) - f(u_l) - speed * (u_r - u_l)."""
    return float(np.max(np.abs(model.flux(u_r) - model.flux(u_l) - speed * (u_r - u_l))))


def lax_margins(model: SystemModel, u_l: np.ndarray, u_r: np.ndarray, family: int, speed: float) -> Tuple[float, float]:
    """(lambda_i(u_l) - speed, speed - lambda_i(u_r))."""
    left = eigen_at(model, u_l).eigenvalue(family)
    right = eigen_at(model, u_r).eigenvalue(family)
    return left - speed, speed - right

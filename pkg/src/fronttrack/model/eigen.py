"""
Eigenstructure of the Jacobian with the normalization used throughout the package:

- GN field:  D lambda_i . r_i = 1
- LD field:  |r_i| = 1
- left vectors biorthogonal to the right ones, l_i . r_j = delta_ij
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from fronttrack.errors import NonHyperbolicError, OutOfDomainError
from fronttrack.model.systems import SystemModel

EIGEN_GAP_TOLERANCE = 1e-12
IMAG_TOLERANCE = 1e-10
FD_STEP = 1e-6

_ORIENTATION_CACHE: "weakref.WeakKeyDictionary[SystemModel, np.ndarray]" = weakref.WeakKeyDictionary()
_SPEED_BOUND_CACHE: "weakref.WeakKeyDictionary[SystemModel, float]" = weakref.WeakKeyDictionary()


@dataclass(frozen=True, eq=False)
class EigenStructure:
    eigenvalues: np.ndarray
    right: np.ndarray  # columns are r_i
    left: np.ndarray  # rows are l_i

    def r(self, family: int) -> np.ndarray:
        return self.right[:, family - 1]

    def l(self, family: int) -> np.ndarray:
        return self.left[family - 1, :]

    def eigenvalue(self, family: int) -> float:
        return float(self.eigenvalues[family - 1])


def _numeric_eigensystem(model: SystemModel, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = scipy.linalg.eig(model.jacobian(u))
    if np.any(np.abs(values.imag) > IMAG_TOLERANCE * max(1.0, float(np.max(np.abs(values.real))))):
        raise NonHyperbolicError(f"{model.name}: complex eigenvalues at u={u.tolist()}")
    order = np.argsort(values.real)
    return values.real[order], vectors.real[:, order]


def raw_eigenvalues(model: SystemModel, u: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of A(u) without domain checks or normalization."""
    if model.eigensystem is not None:
        return model.eigensystem(u)[0]
    return _numeric_eigensystem(model, u)[0]


def _raw(model: SystemModel, u: np.ndarray):
    if model.eigensystem is not None:
        lam, right, grad = model.eigensystem(u)
        return np.asarray(lam, dtype=float), np.array(right, dtype=float), grad
    lam, right = _numeric_eigensystem(model, u)
    return lam, right, None


def _orientation(model: SystemModel) -> np.ndarray:
    """Index of the designated (largest-magnitude at the box centre) component per family."""
    cached = _ORIENTATION_CACHE.get(model)
    if cached is None:
        _, right, _ = _raw(model, model.box_center)
        cached = np.argmax(np.abs(right), axis=0)
        _ORIENTATION_CACHE[model] = cached
    return cached


def directional_derivative(model: SystemModel, u: np.ndarray, family: int, direction: np.ndarray) -> float:
    """Central-difference D lambda_i(u) . direction."""
    h = FD_STEP / max(1.0, float(np.linalg.norm(direction)))
    plus = raw_eigenvalues(model, u + h * direction)[family - 1]
    minus = raw_eigenvalues(model, u - h * direction)[family - 1]
    return float((plus - minus) / (2.0 * h))


def eigenvalue_gradient(model: SystemModel, u: np.ndarray, family: int) -> np.ndarray:
    """Gradient of lambda_i at u, closed form when the model provides it."""
    if model.eigensystem is not None:
        grad = model.eigensystem(u)[2]
        if grad is not None:
            return np.asarray(grad, dtype=float)[family - 1].copy()
    out = np.empty(model.n_eqs)
    for j in range(model.n_eqs):
        e = np.zeros(model.n_eqs)
        e[j] = 1.0
        out[j] = directional_derivative(model, u, family, e)
    return out


def eigen_at(model: SystemModel, u: np.ndarray) -> EigenStructure:
    if not model.in_box(u):
        raise OutOfDomainError(f"{model.name}: state {u.tolist()} outside the admissible box")

    lam, right, grad = _raw(model, u)
    if model.n_eqs > 1 and np.any(np.diff(lam) <= EIGEN_GAP_TOLERANCE):
        raise NonHyperbolicError(f"{model.name}: eigenvalues coincide at u={u.tolist()}")

    designated = _orientation(model)
    for i in range(model.n_eqs):
        if right[designated[i], i] < 0.0:
            right[:, i] = -right[:, i]

    for i in range(model.n_eqs):
        r = right[:, i]
        if model.is_genuinely_nonlinear(i + 1):
            if grad is not None:
                slope = float(np.dot(grad[i], r))
            else:
                slope = directional_derivative(model, u, i + 1, r)
            if slope == 0.0:
                raise NonHyperbolicError(f"{model.name}: field {i + 1} degenerate at u={u.tolist()}")
            right[:, i] = r / slope
        else:
            right[:, i] = r / np.linalg.norm(r)

    left = np.linalg.inv(right)
    return EigenStructure(eigenvalues=lam, right=right, left=left)


def max_characteristic_speed(model: SystemModel, samples_per_axis: int = 17) -> float:
    """Supremum of lambda_N over a sample grid of the box (corners included)."""
    cached = _SPEED_BOUND_CACHE.get(model)
    if cached is not None:
        return cached

    axes = [np.linspace(lo, hi, samples_per_axis) for lo, hi in zip(model.box_low, model.box_high)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, model.n_eqs)
    bound = max(float(raw_eigenvalues(model, u)[-1]) for u in grid)
    _SPEED_BOUND_CACHE[model] = bound
    return bound


def np_speed(model: SystemModel) -> float:
    """Speed of non-physical fronts, one unit above every characteristic speed."""
    return max_characteristic_speed(model) + 1.0

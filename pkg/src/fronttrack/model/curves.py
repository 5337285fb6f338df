"""Wave curves: rarefaction (integral) curves, Hugoniot loci and their composite."""

from __future__ import annotations

import logging
import math
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from fronttrack.errors import LeftDomainError, NoConvergenceError, OutOfDomainError
from fronttrack.model.averaging import averaged_speed
from fronttrack.model.eigen import eigen_at, eigenvalue_gradient
from fronttrack.model.systems import SystemModel

logger = logging.getLogger(__name__)

RK4_MAX_STEP = 1e-3
RK4_MIN_STEPS = 8
NEWTON_TOLERANCE = 1e-12
NEWTON_MAX_ITER = 50


def _r_tilde(model: SystemModel, u: np.ndarray, family: int) -> np.ndarray:
    try:
        return eigen_at(model, u).r(family)
    except OutOfDomainError as exc:
        raise LeftDomainError(f"{model.name}: wave curve of family {family} left the box at {u.tolist()}") from exc


def rarefaction_point(model: SystemModel, u0: np.ndarray, family: int, s: float) -> np.ndarray:
    """
    Integrate u' = r_i(u) from u0 over the parameter interval [0, s] with classical RK4.

    The parameter may be negative (used as a Newton initial guess on the shock branch).
    For GN fields the parameter equals the increase of lambda_i along the curve.
    """
    u = np.array(u0, dtype=float)
    if s == 0.0:
        return u

    n_steps = max(RK4_MIN_STEPS, math.ceil(abs(s) / RK4_MAX_STEP))
    h = s / n_steps
    for _ in range(n_steps):
        k1 = _r_tilde(model, u, family)
        k2 = _r_tilde(model, u + 0.5 * h * k1, family)
        k3 = _r_tilde(model, u + 0.5 * h * k2, family)
        k4 = _r_tilde(model, u + h * k3, family)
        u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not model.in_box(u):
        raise LeftDomainError(f"{model.name}: rarefaction curve ended outside the box at {u.tolist()}")
    return u


def _hugoniot_system(model: SystemModel, u0: np.ndarray, lam0: float, family: int, s: float, z: np.ndarray):
    n = model.n_eqs
    u, speed = z[:n], z[n]
    du = u - u0

    residual = np.empty(n + 1)
    residual[:n] = model.flux(u) - model.flux(u0) - speed * du
    residual[n] = eigen_at(model, u).eigenvalue(family) - lam0 - s

    jac = np.zeros((n + 1, n + 1))
    jac[:n, :n] = model.jacobian(u) - speed * np.eye(n)
    jac[:n, n] = -du
    jac[n, :n] = eigenvalue_gradient(model, u, family)
    return residual, jac


def hugoniot_point(model: SystemModel, u0: np.ndarray, family: int, s: float) -> Tuple[np.ndarray, float]:
    """
    State on the i-th Hugoniot locus through u0 with lambda_i(u) - lambda_i(u0) = s.

    Returns the state together with the i-th eigenvalue of the averaged matrix, which is the
    Rankine-Hugoniot speed. LD loci coincide with integral curves and are delegated there.
    """
    u0 = np.array(u0, dtype=float)
    if s == 0.0:
        return u0, eigen_at(model, u0).eigenvalue(family)

    if not model.is_genuinely_nonlinear(family):
        u = rarefaction_point(model, u0, family, s)
        return u, averaged_speed(model, u0, u, family)

    n = model.n_eqs
    lam0 = eigen_at(model, u0).eigenvalue(family)
    guess = rarefaction_point(model, u0, family, s)

    z = np.empty(n + 1)
    z[:n] = guess
    z[n] = lam0 + 0.5 * s

    for iteration in range(NEWTON_MAX_ITER):
        try:
            residual, jac = _hugoniot_system(model, u0, lam0, family, s, z)
        except OutOfDomainError as exc:
            raise LeftDomainError(f"{model.name}: Hugoniot iterate left the box") from exc

        if np.max(np.abs(residual)) <= NEWTON_TOLERANCE:
            u = z[:n].copy()
            return u, averaged_speed(model, u0, u, family)

        try:
            step = np.linalg.solve(jac, -residual)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(f"{model.name}: singular Hugoniot Jacobian at iteration {iteration}") from exc
        z = z + step

    raise NoConvergenceError(
        f"{model.name}: Hugoniot Newton did not converge for family {family}, s={s} from {u0.tolist()}"
    )


def wave_curve_point(model: SystemModel, u0: np.ndarray, family: int, s: float) -> np.ndarray:
    """Psi_i(s)(u0): shock branch for s < 0 on GN fields, integral curve otherwise."""
    if s < 0.0 and model.is_genuinely_nonlinear(family):
        return hugoniot_point(model, u0, family, s)[0]
    return rarefaction_point(model, u0, family, s)


def lax_composite(model: SystemModel, u0: np.ndarray, strengths: Sequence[float]) -> np.ndarray:
    """Intermediate states omega_0 = u0, ..., omega_N of Psi_N(s_N) o ... o Psi_1(s_1)(u0)."""
    states = np.empty((model.n_eqs + 1, model.n_eqs))
    states[0] = u0
    for i, s in enumerate(strengths, start=1):
        states[i] = wave_curve_point(model, states[i - 1], i, float(s))
    return states


def curve_agreement_slope(
    model: SystemModel,
    u0: np.ndarray,
    family: int,
    parameters: Sequence[float] = (1e-1, 1e-2, 1e-3),
) -> float:
    """
    Log-log slope of |Psi_rar(-s) - Psi_shock(-s)| against s.

    Both curves have second-order contact at s = 0, so the slope is close to 3.
    """
    gaps = []
    for s in parameters:
        rar = rarefaction_point(model, u0, family, -s)
        shock, _ = hugoniot_point(model, u0, family, -s)
        gaps.append(float(np.linalg.norm(rar - shock)))
    logger.debug("curve gaps for family %d: %s", family, gaps)
    fit = linregress(np.log(parameters), np.log(gaps))
    return float(fit.slope)

"""Sampling checks of the structural assumptions on a model."""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from fronttrack.errors import FrontTrackError
from fronttrack.model.eigen import directional_derivative, eigen_at, raw_eigenvalues
from fronttrack.model.systems import FieldKind, SystemModel

JACOBIAN_REL_TOLERANCE = 1e-6
BIORTHOGONALITY_TOLERANCE = 1e-10
NORMALIZATION_TOLERANCE = 1e-8
LD_TOLERANCE = 1e-8


@dataclass
class ModelReport:
    model: str
    samples: int
    issues: List[str] = field(default_factory=list)
    observed_gn_constant: float = float("inf")

    @property
    def passed(self) -> bool:
        return not self.issues


def sample_box(model: SystemModel, samples_per_axis: int = 5) -> np.ndarray:
    axes = [np.linspace(lo, hi, samples_per_axis) for lo, hi in zip(model.box_low, model.box_high)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, model.n_eqs)


def _fd_jacobian(model: SystemModel, u: np.ndarray, h: float = 1e-6) -> np.ndarray:
    jac = np.empty((model.n_eqs, model.n_eqs))
    for j in range(model.n_eqs):
        e = np.zeros(model.n_eqs)
        e[j] = h * max(1.0, abs(u[j]))
        jac[:, j] = (model.flux(u + e) - model.flux(u - e)) / (2.0 * e[j])
    return jac


def estimate_gn_constant(model: SystemModel, samples_per_axis: int = 9) -> float:
    """Minimum of |D lambda_i . r_i| with unit r_i over the sampled box and all GN fields."""
    lowest = np.inf
    for u in sample_box(model, samples_per_axis):
        structure = eigen_at(model, u)
        for i, kind in enumerate(model.field_kinds, start=1):
            if kind is not FieldKind.GENUINELY_NONLINEAR:
                continue
            r = structure.r(i)
            unit = r / np.linalg.norm(r)
            lowest = min(lowest, abs(directional_derivative(model, u, i, unit)))
    return float(lowest)


def validate_model(model: SystemModel, samples_per_axis: int = 5) -> ModelReport:
    """
    Check strict hyperbolicity, the GN bound, the LD condition, the normalization,
    biorthogonality and the Jacobian against finite differences at sampled states.
    """
    points = sample_box(model, samples_per_axis)
    report = ModelReport(model=model.name, samples=len(points))

    for u in points:
        where = f"u={np.round(u, 6).tolist()}"
        try:
            structure = eigen_at(model, u)
        except FrontTrackError as exc:
            report.issues.append(f"{where}: {exc}")
            continue

        jac = model.jacobian(u)
        fd = _fd_jacobian(model, u)
        scale = max(1.0, float(np.max(np.abs(jac))))
        if np.max(np.abs(jac - fd)) > JACOBIAN_REL_TOLERANCE * scale:
            report.issues.append(f"{where}: jacobian disagrees with finite differences")

        if np.max(np.abs(structure.left @ structure.right - np.eye(model.n_eqs))) > BIORTHOGONALITY_TOLERANCE:
            report.issues.append(f"{where}: left/right eigenvectors not biorthogonal")

        for i, kind in enumerate(model.field_kinds, start=1):
            r = structure.r(i)
            slope = directional_derivative(model, u, i, r)
            unit_slope = abs(directional_derivative(model, u, i, r / np.linalg.norm(r)))
            if kind is FieldKind.GENUINELY_NONLINEAR:
                report.observed_gn_constant = min(report.observed_gn_constant, unit_slope)
                if abs(slope - 1.0) > NORMALIZATION_TOLERANCE:
                    report.issues.append(f"{where}: field {i} normalization D lambda . r = {slope:.3e}")
                if unit_slope < model.gn_constant * (1.0 - 1e-9):
                    report.issues.append(f"{where}: field {i} below GN constant ({unit_slope:.3e})")
            else:
                if unit_slope > LD_TOLERANCE:
                    report.issues.append(f"{where}: field {i} not linearly degenerate ({unit_slope:.3e})")
                if abs(np.linalg.norm(r) - 1.0) > NORMALIZATION_TOLERANCE:
                    report.issues.append(f"{where}: field {i} right vector not unit length")

    if model.n_eqs > 1:
        gaps = [float(np.min(np.diff(raw_eigenvalues(model, u)))) for u in points]
        if min(gaps) <= 0.0:
            report.issues.append("eigenvalues not strictly ordered on the box")

    return report

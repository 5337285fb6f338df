"""
Systems of conservation laws u_t + f(u)_x = 0 on an admissible state box.

Built-in systems:
  - Burgers, f(u) = u^2/2
  - p-system, v_t - w_x = 0, w_t + p(v)_x = 0 with p(v) = v^(-gamma)
  - polynomial fluxes with up to three components, supplied term by term
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fronttrack.errors import ConfigError

State = np.ndarray
Eigensystem = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]]

BOX_TOLERANCE = 1e-12


class FieldKind(str, Enum):
    GENUINELY_NONLINEAR = "gn"
    LINEARLY_DEGENERATE = "ld"


@dataclass(frozen=True, eq=False)
class SystemModel:
    """
    A strictly hyperbolic system with its admissible box.

    ``eigensystem`` is an optional closed form returning the ascending eigenvalues, the raw
    right eigenvectors as columns and (optionally) the eigenvalue gradients as rows. Without
    it the Jacobian is decomposed numerically.
    """

    name: str
    n_eqs: int
    flux: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    field_kinds: Tuple[FieldKind, ...]
    gn_constant: float
    box_low: np.ndarray
    box_high: np.ndarray
    eigensystem: Optional[Eigensystem] = None
    tv_limit: float = 0.5
    description: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_eqs < 1:
            raise ConfigError("n_eqs must be a positive integer")
        if len(self.field_kinds) != self.n_eqs:
            raise ConfigError(f"expected {self.n_eqs} field kinds, got {len(self.field_kinds)}")
        if self.box_low.shape != (self.n_eqs,) or self.box_high.shape != (self.n_eqs,):
            raise ConfigError("domain box bounds must have one entry per component")
        if np.any(self.box_low >= self.box_high):
            raise ConfigError("domain box must have box_low < box_high componentwise")
        if self.gn_constant <= 0.0:
            raise ConfigError("gn_constant must be positive")

    @property
    def is_scalar(self) -> bool:
        return self.n_eqs == 1

    @property
    def box_center(self) -> np.ndarray:
        return 0.5 * (self.box_low + self.box_high)

    @property
    def np_family(self) -> int:
        """Family index used for non-physical fronts (one past the last field)."""
        return self.n_eqs + 1

    def field_kind(self, family: int) -> FieldKind:
        return self.field_kinds[family - 1]

    def is_genuinely_nonlinear(self, family: int) -> bool:
        return self.field_kinds[family - 1] is FieldKind.GENUINELY_NONLINEAR

    def in_box(self, u: np.ndarray, tol: float = BOX_TOLERANCE) -> bool:
        scale = np.maximum(1.0, np.abs(self.box_high - self.box_low))
        return bool(np.all(u >= self.box_low - tol * scale) and np.all(u <= self.box_high + tol * scale))

    def default_c0(self) -> float:
        return 16.0 / self.gn_constant


def as_state(value: Any, n_eqs: int) -> np.ndarray:
    u = np.atleast_1d(np.asarray(value, dtype=float)).reshape(-1)
    if u.shape != (n_eqs,):
        raise ConfigError(f"state {value!r} does not have {n_eqs} components")
    return u


def _box(bounds: Optional[Sequence[Sequence[float]]], default: Sequence[Sequence[float]]) -> Tuple[np.ndarray, np.ndarray]:
    pairs = np.asarray(bounds if bounds is not None else default, dtype=float)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ConfigError("box must be a list of [low, high] pairs")
    return pairs[:, 0].copy(), pairs[:, 1].copy()


# --- Burgers ---

def burgers(box: Optional[Sequence[Sequence[float]]] = None) -> SystemModel:
    low, high = _box(box, [[-2.0, 2.0]])

    def flux(u: np.ndarray) -> np.ndarray:
        return 0.5 * u * u

    def jacobian(u: np.ndarray) -> np.ndarray:
        return np.array([[u[0]]])

    def eigensystem(u: np.ndarray):
        return np.array([u[0]]), np.ones((1, 1)), np.ones((1, 1))

    return SystemModel(
        name="burgers",
        n_eqs=1,
        flux=flux,
        jacobian=jacobian,
        field_kinds=(FieldKind.GENUINELY_NONLINEAR,),
        gn_constant=1.0,
        box_low=low,
        box_high=high,
        eigensystem=eigensystem,
        # scalar front tracking needs no smallness assumption
        tv_limit=math.inf,
        description={"kind": "burgers", "box": [[float(low[0]), float(high[0])]]},
    )


# --- p-system ---

def p_system(gamma: float = 2.0, box: Optional[Sequence[Sequence[float]]] = None) -> SystemModel:
    if gamma <= 0.0:
        raise ConfigError("p-system requires gamma > 0")
    low, high = _box(box, [[0.5, 2.0], [-1.5, 1.5]])
    if low.shape != (2,):
        raise ConfigError("p-system box needs two [low, high] pairs")
    if low[0] <= 0.0:
        raise ConfigError("p-system box must keep the specific volume v positive")

    def sound_speed(v: float) -> float:
        return math.sqrt(gamma * v ** (-gamma - 1.0))

    def flux(u: np.ndarray) -> np.ndarray:
        return np.array([-u[1], u[0] ** (-gamma)])

    def jacobian(u: np.ndarray) -> np.ndarray:
        return np.array([[0.0, -1.0], [-gamma * u[0] ** (-gamma - 1.0), 0.0]])

    def eigensystem(u: np.ndarray):
        v = u[0]
        c = sound_speed(v)
        dc = -0.5 * (gamma + 1.0) * c / v
        lam = np.array([-c, c])
        right = np.array([[1.0, 1.0], [c, -c]])
        grad = np.array([[-dc, 0.0], [dc, 0.0]])
        return lam, right, grad

    # |D lambda . r| for unit r is the same for both fields; its minimum over v bounds k
    v_grid = np.linspace(low[0], high[0], 257)
    c_grid = np.sqrt(gamma * v_grid ** (-gamma - 1.0))
    gn = float(np.min(0.5 * (gamma + 1.0) * c_grid / (v_grid * np.sqrt(1.0 + c_grid**2))))

    return SystemModel(
        name=f"p_system(gamma={gamma:g})",
        n_eqs=2,
        flux=flux,
        jacobian=jacobian,
        field_kinds=(FieldKind.GENUINELY_NONLINEAR, FieldKind.GENUINELY_NONLINEAR),
        gn_constant=gn,
        box_low=low,
        box_high=high,
        eigensystem=eigensystem,
        description={"kind": "p_system", "gamma": gamma, "box": [[float(a), float(b)] for a, b in zip(low, high)]},
    )


# --- polynomial fluxes ---

@dataclass(frozen=True)
class PolynomialTerm:
    coeff: float
    powers: Tuple[int, ...]


def _compile_component(terms: Sequence[PolynomialTerm], n_eqs: int) -> Tuple[np.ndarray, np.ndarray]:
    coeffs = np.array([t.coeff for t in terms], dtype=float)
    powers = np.array([t.powers for t in terms], dtype=int).reshape(len(terms), n_eqs)
    if np.any(powers < 0):
        raise ConfigError("polynomial powers must be non-negative")
    return coeffs, powers


def polynomial_system(
    components: Sequence[Sequence[PolynomialTerm]],
    fields: Sequence[str],
    box: Sequence[Sequence[float]],
    gn_constant: Optional[float] = None,
    name: str = "polynomial",
) -> SystemModel:
    """
    Flux f_k(u) = sum_t c_t * prod_j u_j^p_tj for each component k.

    When ``gn_constant`` is omitted it is estimated by sampling the box.
    """
    n_eqs = len(components)
    if not 1 <= n_eqs <= 3:
        raise ConfigError("polynomial systems support 1 to 3 components")
    try:
        kinds = tuple(FieldKind(f) for f in fields)
    except ValueError as exc:
        raise ConfigError(f"unknown field kind in {list(fields)!r}") from exc

    compiled: List[Tuple[np.ndarray, np.ndarray]] = []
    for terms in components:
        if not terms:
            raise ConfigError("every flux component needs at least one term")
        for term in terms:
            if len(term.powers) != n_eqs:
                raise ConfigError(f"term {term!r} needs {n_eqs} powers")
        compiled.append(_compile_component(terms, n_eqs))

    low, high = _box(box, box)

    def flux(u: np.ndarray) -> np.ndarray:
        out = np.empty(n_eqs)
        for k, (coeffs, powers) in enumerate(compiled):
            out[k] = float(np.sum(coeffs * np.prod(u ** powers, axis=1)))
        return out

    def jacobian(u: np.ndarray) -> np.ndarray:
        jac = np.zeros((n_eqs, n_eqs))
        for k, (coeffs, powers) in enumerate(compiled):
            for j in range(n_eqs):
                pj = powers[:, j]
                mask = pj > 0
                if not np.any(mask):
                    continue
                reduced = powers[mask].copy()
                reduced[:, j] -= 1
                jac[k, j] = float(np.sum(coeffs[mask] * pj[mask] * np.prod(u ** reduced, axis=1)))
        return jac

    description = {
        "kind": "polynomial",
        "name": name,
        "terms": [[{"coeff": t.coeff, "powers": list(t.powers)} for t in comp] for comp in components],
        "fields": [k.value for k in kinds],
        "box": [[float(a), float(b)] for a, b in zip(low, high)],
    }
    if gn_constant is not None:
        description["gn_constant"] = float(gn_constant)

    provisional = SystemModel(
        name=name,
        n_eqs=n_eqs,
        flux=flux,
        jacobian=jacobian,
        field_kinds=kinds,
        gn_constant=gn_constant if gn_constant is not None else 1.0,
        box_low=low,
        box_high=high,
        tv_limit=math.inf if n_eqs == 1 else 0.5,
        description=description,
    )
    if gn_constant is not None or not any(k is FieldKind.GENUINELY_NONLINEAR for k in kinds):
        return provisional

    from fronttrack.model.validation import estimate_gn_constant

    estimated = estimate_gn_constant(provisional)
    return SystemModel(
        name=name,
        n_eqs=n_eqs,
        flux=flux,
        jacobian=jacobian,
        field_kinds=kinds,
        gn_constant=estimated,
        box_low=low,
        box_high=high,
        tv_limit=provisional.tv_limit,
        description=description,
    )


def model_from_description(description: Dict[str, Any]) -> SystemModel:
    """Rebuild a model from the ``description`` dict carried by every built-in system."""
    kind = description.get("kind")
    box = description.get("box")
    if kind == "burgers":
        return burgers(box=box)
    if kind == "p_system":
        return p_system(gamma=float(description.get("gamma", 2.0)), box=box)
    if kind == "polynomial":
        components = [
            [PolynomialTerm(coeff=float(t["coeff"]), powers=tuple(int(p) for p in t["powers"])) for t in comp]
            for comp in description["terms"]
        ]
        return polynomial_system(
            components,
            fields=description["fields"],
            box=description["box"],
            gn_constant=description.get("gn_constant"),
            name=description.get("name", "polynomial"),
        )
    raise ConfigError(f"unknown system kind {kind!r}")

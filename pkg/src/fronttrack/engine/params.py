from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from fronttrack.errors import ConfigError
from fronttrack.model.systems import SystemModel

DEFAULT_SPEED_PERTURB = 1e-9
DEFAULT_MAX_FRONTS = 1_000_000
DEFAULT_CASE_SPLIT = 0.25
TIME_TOLERANCE = 1e-13
DEFAULT_LADDER: Tuple[Tuple[float, float], ...] = ((0.05, 0.2), (0.02, 0.1))


def validate_ladder(ladder: Sequence[Sequence[float]]) -> Tuple[Tuple[float, float], ...]:
    """Check 0 < 2^k eps0_k <= eps1_k for k = 1, 2, ... with both sequences non-increasing."""
    pairs: list[Tuple[float, float]] = []
    for k, pair in enumerate(ladder, start=1):
        if len(pair) != 2:
            raise ConfigError(f"ladder entry {k} must be an (eps0, eps1) pair")
        eps0, eps1 = float(pair[0]), float(pair[1])
        if eps0 <= 0.0:
            raise ConfigError(f"ladder entry {k}: eps0 must be positive")
        if eps1 < (2**k) * eps0:
            raise ConfigError(f"ladder entry {k}: eps1={eps1} is below 2^{k} * eps0={2**k * eps0}")
        if pairs and (eps0 > pairs[-1][0] or eps1 > pairs[-1][1]):
            raise ConfigError(f"ladder entry {k} must not exceed the previous thresholds")
        pairs.append((eps0, eps1))
    return tuple(pairs)


@dataclass(frozen=True)
class RunParams:
    """
    Parameters of one front-tracking run.

    ``np_threshold`` defaults to nu^2 and ``np_budget`` to 10 nu. ``c0`` and ``tv_guard`` stay
    ``None`` until resolved against a model (16/k and the model's TV limit). ``case_split`` is the
    fraction of the initial continuous mass that separates the two branches of a decay trace.
    """

    nu: float
    horizon: float
    np_threshold: Optional[float] = None
    np_budget: Optional[float] = None
    speed_perturb: float = DEFAULT_SPEED_PERTURB
    epsilon_ladder: Tuple[Tuple[float, float], ...] = DEFAULT_LADDER
    c0: Optional[float] = None
    tv_guard: Optional[float] = None
    max_fronts: int = DEFAULT_MAX_FRONTS
    case_split: float = DEFAULT_CASE_SPLIT
    time_tolerance: float = field(default=TIME_TOLERANCE)

    def __post_init__(self) -> None:
        if not self.nu > 0.0:
            raise ConfigError("nu must be positive")
        if not self.horizon > 0.0:
            raise ConfigError("horizon must be positive")
        if self.speed_perturb < 0.0:
            raise ConfigError("speed_perturb must be non-negative")
        if self.max_fronts < 1:
            raise ConfigError("max_fronts must be at least 1")
        if not 0.0 < self.case_split < 1.0:
            raise ConfigError("case_split must lie in (0, 1)")
        if self.np_threshold is None:
            object.__setattr__(self, "np_threshold", self.nu**2)
        if self.np_budget is None:
            object.__setattr__(self, "np_budget", 10.0 * self.nu)
        if self.np_threshold < 0.0 or self.np_budget <= 0.0:
            raise ConfigError("np_threshold must be >= 0 and np_budget > 0")
        if self.c0 is not None and self.c0 <= 0.0:
            raise ConfigError("c0 must be positive")
        object.__setattr__(self, "epsilon_ladder", validate_ladder(self.epsilon_ladder))

    def glimm_constant(self, model: SystemModel) -> float:
        return self.c0 if self.c0 is not None else model.default_c0()

    def tv_limit(self, model: SystemModel) -> float:
        return self.tv_guard if self.tv_guard is not None else model.tv_limit

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nu": self.nu,
            "horizon": self.horizon,
            "np_threshold": self.np_threshold,
            "np_budget": self.np_budget,
            "speed_perturb": self.speed_perturb,
            "epsilon_ladder": [list(p) for p in self.epsilon_ladder],
            "c0": self.c0,
            "tv_guard": self.tv_guard,
            "max_fronts": self.max_fronts,
            "case_split": self.case_split,
            "time_tolerance": self.time_tolerance,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunParams":
        data = dict(data)
        if "epsilon_ladder" in data:
            data["epsilon_ladder"] = tuple(tuple(p) for p in data["epsilon_ladder"])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"invalid run parameters: {exc}") from exc

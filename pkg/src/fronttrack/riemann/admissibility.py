from dataclasses import dataclass

from fronttrack.model.averaging import lax_margins, rh_residual
from fronttrack.model.systems import SystemModel
from fronttrack.riemann.waves import Wave, WaveKind

LAX_TOLERANCE = 1e-10


@dataclass(frozen=True)
class LaxReport:
    family: int
    kind: WaveKind
    left_margin: float
    right_margin: float
    rh_residual: float

    @property
    def admissible(self) -> bool:
        return self.left_margin >= -LAX_TOLERANCE and self.right_margin >= -LAX_TOLERANCE

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "kind": self.kind.value,
            "left_margin": self.left_margin,
            "right_margin": self.right_margin,
            "rh_residual": self.rh_residual,
            "admissible": self.admissible,
        }


def lax_check(model: SystemModel, wave: Wave) -> LaxReport:
    """Margins lambda_i(left) - speed and speed - lambda_i(right) of a shock or contact."""
    if wave.kind not in (WaveKind.SHOCK, WaveKind.CONTACT):
        raise ValueError(f"Lax margins are defined for shocks and contacts, not {wave.kind.value}")

    left, right = lax_margins(model, wave.left_state, wave.right_state, wave.family, wave.speed)
    return LaxReport(
        family=wave.family,
        kind=wave.kind,
        left_margin=left,
        right_margin=right,
        rh_residual=rh_residual(model, wave.left_state, wave.right_state, wave.speed),
    )

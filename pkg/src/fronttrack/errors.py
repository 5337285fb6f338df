"""Exception hierarchy shared by all fronttrack modules."""

from __future__ import annotations

from typing import Any


class FrontTrackError(RuntimeError):
    """Base class for every error raised by fronttrack."""


class NonHyperbolicError(FrontTrackError):
    """Eigenvalues of the Jacobian are complex or coincide."""


class OutOfDomainError(FrontTrackError):
    """A state lies outside the admissible box of the model."""


class LeftDomainError(OutOfDomainError):
    """A wave-curve integration or Newton iterate left the admissible box."""


class NoConvergenceError(FrontTrackError):
    """Newton iteration did not reach its tolerance."""


class TVTooLargeError(FrontTrackError):
    """Initial datum has a total variation beyond the model's guard."""


class _RunAlarm(FrontTrackError):
    """Engine alarm that still carries the partially built run log."""

    def __init__(self, message: str, log: Any = None) -> None:
        super().__init__(message)
        self.log = log


class BudgetExceededError(_RunAlarm):
    """Total non-physical strength exceeded the configured budget."""


class FrontCountExplosionError(_RunAlarm):
    """More fronts were created than the engine cap allows."""


class InconsistentJumpSetError(FrontTrackError):
    """A jump set references nodes or strengths that do not match the run log."""


class JumpSetMissingError(FrontTrackError):
    """A jump/continuous split was requested without a jump set."""


class BoundaryNotCharacteristicError(FrontTrackError):
    """A region boundary is not a generalized characteristic of the run."""


class NotScalarError(FrontTrackError):
    """Operation only defined for scalar conservation laws."""


class ConfigError(FrontTrackError, ValueError):
    """Scenario configuration is malformed."""


class ReplayError(FrontTrackError):
    """Events of a run log cannot be re-applied to its fronts."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping

from fronttrack.config.scenario import DEFAULT_CALIBRATION
from fronttrack.evaluation.checks import ScenarioReport

logger = logging.getLogger(__name__)

SAFETY_FACTOR = 2.0
MIN_CONSTANT = 1.0


@dataclass
class CalibrationResult:
    """Frozen constants with the largest observed ratio behind each and where it came from."""

    constants: Dict[str, float]
    observed: Dict[str, float] = field(default_factory=dict)
    sources: Dict[str, str] = field(default_factory=dict)
    unbounded: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "constants": dict(sorted(self.constants.items())),
            "observed": dict(sorted(self.observed.items())),
            "sources": dict(sorted(self.sources.items())),
            "unbounded": sorted(self.unbounded),
        }


def calibrate(reports: Iterable[ScenarioReport], current: Mapping[str, float] | None = None) -> CalibrationResult:
    """
    Each constant becomes SAFETY_FACTOR times the largest ratio observed across the reports,
    never below MIN_CONSTANT. Constants with no finite observation keep their current value.
    """
    current = {**DEFAULT_CALIBRATION, **(current or {})}
    observed: Dict[str, float] = {}
    sources: Dict[str, str] = {}
    unbounded: List[str] = []
    for report in reports:
        for check in report.checks:
            for name, ratio in check.ratios.items():
                if not math.isfinite(ratio):
                    logger.warning("%s: %s ratio is unbounded (zero right-hand side)", report.name, name)
                    unbounded.append(f"{report.name}:{name}")
                    continue
                if ratio > observed.get(name, -math.inf):
                    observed[name] = ratio
                    sources[name] = report.name

    constants = dict(current)
    for name, ratio in observed.items():
        constants[name] = max(SAFETY_FACTOR * ratio, MIN_CONSTANT)
        logger.info("calibrated %s = %.4g (max ratio %.4g in %s)", name, constants[name], ratio, sources[name])
    return CalibrationResult(constants, observed, sources, unbounded)

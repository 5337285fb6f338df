from __future__ import annotations

import argparse
import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np
from tqdm import tqdm

from fronttrack.config.scenario import ScenarioConfig
from fronttrack.evaluation.checks import ScenarioReport, check_scenario

logger = logging.getLogger(__name__)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, default=_json_default)


def run_suite(
    scenarios: Sequence[ScenarioConfig],
    constants: Optional[Mapping[str, float]] = None,
    jobs: int = 1,
) -> List[ScenarioReport]:
    """Check every scenario, with ``jobs`` worker processes; reports come back sorted by name."""
    constants = dict(constants or {})
    reports: List[ScenarioReport] = []
    if jobs <= 1 or len(scenarios) <= 1:
        for config in tqdm(scenarios, desc="scenarios", unit="scenario", disable=len(scenarios) <= 1):
            reports.append(check_scenario(config, constants))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(check_scenario, config, constants) for config in scenarios]
            for future in tqdm(as_completed(futures), total=len(futures), desc="scenarios", unit="scenario"):
                reports.append(future.result())
    return sorted(reports, key=lambda r: r.name)


def summarize(reports: Sequence[ScenarioReport]) -> Dict[str, Any]:
    return {
        "scenarios": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "failed": {r.name: r.failed() or [r.error] for r in reports if not r.passed},
    }


def write_evaluation_report(
    reports: Sequence[ScenarioReport],
    out_dir: str | Path,
    args: argparse.Namespace,
    runtime: float,
    extra: Optional[Mapping[str, Any]] = None,
) -> Path:
    """
    Writes the consolidated JSON report into out_dir, scenarios sorted by name.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    report: Dict[str, Any] = {
        "timestamp": datetime.now().isoformat(),
        "command": getattr(args, "command", None),
        "config": str(getattr(args, "config", None)),
        "scenario": getattr(args, "scenario", None),
        "jobs": getattr(args, "jobs", 1),
        "Runtime (in seconds)": runtime,
        "summary": summarize(reports),
        "reports": [r.to_dict() for r in sorted(reports, key=lambda r: r.name)],
    }
    if extra:
        report.update(extra)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    report_path = out_dir / f"evaluation__{timestamp}.json"
    report_path.write_text(to_json(report), encoding="utf-8")
    logger.info("wrote %s", report_path)
    return report_path

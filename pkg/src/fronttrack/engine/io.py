"""
Run log export and import.

Layout of an exported run directory:
  run.json        model description, parameters, far states, initial/final ids, alarms
  fronts.jsonl    one front per line
  events.jsonl    one interaction event per line, in time order
  snapshots.csv   t, x_left, u_1..u_N after every event time
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Dict, List

import numpy as np
import pandas as pd

from fronttrack.engine.params import RunParams
from fronttrack.engine.queries import snapshot_frame
from fronttrack.engine.records import Front, InteractionEvent, RunLog
from fronttrack.errors import ConfigError
from fronttrack.model.systems import model_from_description

logger = logging.getLogger(__name__)

RUN_FILE = "run.json"
FRONTS_FILE = "fronts.jsonl"
EVENTS_FILE = "events.jsonl"
SNAPSHOTS_FILE = "snapshots.csv"


def _write_jsonl(path: Path, records: List[dict]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record))
            fh.write("\n")


def _read_jsonl(path: Path) -> List[dict]:
    with path.open("r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def run_header(log: RunLog) -> dict:
    return {
        "model": log.model.description,
        "params": log.params.to_dict(),
        "left_state": [float(v) for v in log.left_state],
        "right_state": [float(v) for v in log.right_state],
        "initial_ids": list(log.initial_ids),
        "final_ids": list(log.final_ids),
        "np_peak": log.np_peak,
        "alarms": list(log.alarms),
        "event_count": len(log.events),
        "front_count": len(log.fronts),
    }


def export_run(log: RunLog, out_dir: Path | str) -> Dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "run": out_dir / RUN_FILE,
        "fronts": out_dir / FRONTS_FILE,
        "events": out_dir / EVENTS_FILE,
        "snapshots": out_dir / SNAPSHOTS_FILE,
    }
    paths["run"].write_text(json.dumps(run_header(log), indent=2), encoding="utf-8")
    _write_jsonl(paths["fronts"], [log.fronts[i].to_dict() for i in sorted(log.fronts)])
    _write_jsonl(paths["events"], [e.to_dict() for e in log.events])
    snapshot_frame(log).to_csv(paths["snapshots"], index=False)
    logger.info("exported %d fronts and %d events to %s", len(log.fronts), len(log.events), out_dir)
    return paths


def load_run(run_dir: Path | str) -> RunLog:
    run_dir = Path(run_dir)
    header_path = run_dir / RUN_FILE
    if not header_path.exists():
        raise ConfigError(f"no exported run found in {run_dir}")
    header = json.loads(header_path.read_text(encoding="utf-8"))

    fronts = {f.id: f for f in (Front.from_dict(d) for d in _read_jsonl(run_dir / FRONTS_FILE))}
    events = [InteractionEvent.from_dict(d) for d in _read_jsonl(run_dir / EVENTS_FILE)]
    return RunLog(
        model=model_from_description(header["model"]),
        params=RunParams.from_dict(header["params"]),
        left_state=np.asarray(header["left_state"], dtype=float),
        right_state=np.asarray(header["right_state"], dtype=float),
        fronts=fronts,
        initial_ids=tuple(header["initial_ids"]),
        events=events,
        final_ids=tuple(header["final_ids"]),
        np_peak=float(header["np_peak"]),
        alarms=list(header["alarms"]),
    )


def load_snapshots(run_dir: Path | str) -> pd.DataFrame:
    return pd.read_csv(Path(run_dir) / SNAPSHOTS_FILE, float_precision="round_trip")

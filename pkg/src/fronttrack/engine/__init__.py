from .params import DEFAULT_LADDER, RunParams, validate_ladder
from .records import Front, InteractionEvent, RunLog
from .queue import Collision, CollisionQueue
from .initial import InitialData, RiemannDatum, SampledDatum, StepsDatum, sample_initial_datum, to_steps
from .tracking import collision_time, id_hash, run
from .queries import Slab, fronts_at, fronts_before, np_total_strength, positions_at, replay, slabs, snapshot_frame, state_at, total_variation
from .io import export_run, load_run, load_snapshots
from .residual import FrontDefect, rh_defects

__all__ = [
    "DEFAULT_LADDER",
    "RunParams",
    "validate_ladder",
    "Front",
    "InteractionEvent",
    "RunLog",
    "Collision",
    "CollisionQueue",
    "InitialData",
    "RiemannDatum",
    "SampledDatum",
    "StepsDatum",
    "sample_initial_datum",
    "to_steps",
    "collision_time",
    "id_hash",
    "run",
    "Slab",
    "fronts_at",
    "fronts_before",
    "positions_at",
    "np_total_strength",
    "replay",
    "slabs",
    "snapshot_frame",
    "state_at",
    "total_variation",
    "export_run",
    "load_run",
    "load_snapshots",
    "FrontDefect",
    "rh_defects",
]

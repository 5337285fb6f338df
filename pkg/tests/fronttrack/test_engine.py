from pathlib import Path

import numpy as np
import pytest

from fronttrack.engine.initial import RiemannDatum, StepsDatum, sample_initial_datum, to_steps
from fronttrack.engine.io import export_run, load_run, load_snapshots
from fronttrack.engine.params import RunParams, validate_ladder
from fronttrack.engine.queries import fronts_at, fronts_before, np_total_strength, replay, state_at, total_variation
from fronttrack.engine.queue import CollisionQueue
from fronttrack.engine.residual import rh_defects
from fronttrack.engine.tracking import collision_time, id_hash, run
from fronttrack.errors import ConfigError, FrontCountExplosionError, TVTooLargeError
from fronttrack.model.systems import burgers, p_system
from fronttrack.riemann.waves import WaveKind

from mocking_objects.scenarios import (
    INTERACTION_FREE,
    MERGE_POSITION,
    MERGE_TIME,
    RAREFACTION,
    SHOCK_MERGE,
    run_log,
)


# --- parameters ---


def test_run_params_defaults_follow_nu():
    params = RunParams(nu=0.1, horizon=1.0)

    assert params.np_threshold == pytest.approx(0.01)
    assert params.np_budget == pytest.approx(1.0)
    assert params.glimm_constant(burgers()) == pytest.approx(16.0)
    assert params.case_split == pytest.approx(0.25)
    assert RunParams.from_dict(params.to_dict()) == params


def test_ladder_needs_doubling_gaps():
    assert validate_ladder([[0.05, 0.2], [0.02, 0.1]]) == ((0.05, 0.2), (0.02, 0.1))
    with pytest.raises(ConfigError):
        validate_ladder([[0.1, 0.15]])
    with pytest.raises(ConfigError):
        validate_ladder([[0.05, 0.2], [0.06, 0.3]])


def test_invalid_run_params():
    with pytest.raises(ConfigError):
        RunParams(nu=0.0, horizon=1.0)
    with pytest.raises(ConfigError):
        RunParams(nu=0.1, horizon=-1.0)
    with pytest.raises(ConfigError):
        RunParams(nu=0.1, horizon=1.0, case_split=1.0)


# --- queue ---


def test_queue_pops_in_time_order():
    queue = CollisionQueue(tolerance=1e-13)
    queue.schedule(2.0, 0.0, left_id=1, right_id=2)
    queue.schedule(1.0, 5.0, left_id=3, right_id=4)

    assert queue.pop_next().left_id == 3
    assert queue.pop_next().left_id == 1
    assert queue.pop_next() is None


def test_queue_resolves_ties_leftmost_first():
    queue = CollisionQueue(tolerance=1e-9)
    queue.schedule(1.0, 3.0, left_id=7, right_id=8)
    queue.schedule(1.0 + 1e-12, -1.0, left_id=5, right_id=6)

    assert queue.has_tie(1.0, exclude_left=7)
    assert queue.pop_next().left_id == 5
    assert len(queue) == 1


def test_queue_rescheduling_invalidates_the_old_entry():
    queue = CollisionQueue(tolerance=1e-13)
    queue.schedule(1.0, 0.0, left_id=1, right_id=2)
    queue.schedule(3.0, 0.0, left_id=1, right_id=9)

    entry = queue.pop_next()
    assert (entry.time, entry.right_id) == (3.0, 9)
    assert queue.is_empty()


def test_id_hash_is_deterministic_and_inside_the_unit_interval():
    values = [id_hash(k) for k in range(100)]

    assert values == [id_hash(k) for k in range(100)]
    assert all(0.0 < v < 1.0 for v in values)


# --- initial data ---


def test_steps_drop_zero_jumps():
    breakpoints, states = to_steps(burgers(), StepsDatum((0.0, 1.0), (np.array([0.5]), np.array([0.5]), np.array([0.0]))))

    assert breakpoints == [1.0]
    assert len(states) == 2


def test_initial_fan_fronts_are_bounded_by_nu():
    initial = sample_initial_datum(burgers(), RiemannDatum(np.array([0.0]), np.array([1.0])), nu=0.25)

    assert len(initial.fronts) == 4
    assert all(f.kind is WaveKind.RAREFACTION_FAN and f.strength <= 0.25 + 1e-12 for f in initial.fronts)
    assert initial.total_variation == pytest.approx(1.0)


def test_total_variation_guard():
    datum = StepsDatum((0.0,), (np.array([1.0, 0.0]), np.array([1.5, 0.5])))

    with pytest.raises(TVTooLargeError):
        sample_initial_datum(p_system(), datum, nu=0.05, tv_guard=0.1)


# --- tracking ---


def test_shock_merge_happens_once_at_the_predicted_point():
    log = run_log(SHOCK_MERGE)

    (event,) = log.events
    assert event.time == pytest.approx(MERGE_TIME, abs=1e-12)
    assert event.position == pytest.approx(MERGE_POSITION, abs=1e-12)
    (merged,) = [log.fronts[i] for i in event.outgoing]
    assert merged.kind is WaveKind.SHOCK
    assert merged.strength == pytest.approx(-0.6, abs=1e-12)
    assert merged.speed == pytest.approx(0.7, abs=1e-12)
    assert log.final_ids == event.outgoing


def test_collision_time_of_two_straight_fronts():
    log = run_log(SHOCK_MERGE)
    left, right = (log.fronts[i] for i in log.initial_ids)

    assert collision_time(left, right) == pytest.approx(MERGE_TIME, abs=1e-12)
    assert collision_time(right, left) is None


def test_interaction_free_run_keeps_its_fronts():
    log = run_log(INTERACTION_FREE)

    assert log.events == []
    assert log.final_ids == log.initial_ids
    assert np_total_strength(log, 1.0) == 0.0
    assert total_variation(log, 0.0) == pytest.approx(total_variation(log, 2.0))


def test_state_and_active_fronts_queries():
    log = run_log(SHOCK_MERGE)

    assert state_at(log, 1.0, -5.0)[0] == pytest.approx(1.0)
    assert state_at(log, 1.0, 5.0)[0] == pytest.approx(0.4)
    t_event = log.events[0].time
    assert len(fronts_before(log, t_event)) == 2
    assert len(fronts_at(log, t_event)) == 1


def test_replay_reproduces_the_final_fronts():
    log = run_log(SHOCK_MERGE)

    slabs = list(replay(log))

    assert len(slabs) == len(log.events) + 1
    assert slabs[-1].ids == log.final_ids


def test_scalar_fronts_satisfy_rankine_hugoniot():
    log = run_log(RAREFACTION)

    assert all(d.passed for d in rh_defects(log))


def test_front_cap_raises_with_the_partial_log():
    model = burgers()
    params = RunParams(nu=0.05, horizon=3.0, max_fronts=2)
    initial = sample_initial_datum(model, StepsDatum((-0.5, 0.0), (np.array([1.0]), np.array([0.7]), np.array([0.4]))), params.nu)

    with pytest.raises(FrontCountExplosionError) as info:
        run(model, params, initial)
    assert info.value.log is not None


# --- export ---


def test_export_and_load_round_trip(tmp_path: Path):
    log = run_log(SHOCK_MERGE)

    paths = export_run(log, tmp_path / "run")
    loaded = load_run(tmp_path / "run")
    again = export_run(loaded, tmp_path / "again")

    for key in paths:
        assert paths[key].read_bytes() == again[key].read_bytes()
    assert loaded.events[0].time == log.events[0].time
    assert not load_snapshots(tmp_path / "run").empty


def test_loading_a_missing_run_is_a_config_error(tmp_path: Path):
    with pytest.raises(ConfigError):
        load_run(tmp_path / "nothing")

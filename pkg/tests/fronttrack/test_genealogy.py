import pytest

from fronttrack.genealogy.paths import (
    NodeRole,
    extract_maximal_fronts,
    jump_set,
    ladder_monotonicity,
    segments_at,
    shock_graph,
    terminal_drops,
)
from fronttrack.errors import InconsistentJumpSetError
from fronttrack.measures.balance import jump_balance_measure

from mocking_objects.scenarios import MERGE_TIME, RAREFACTION, SHOCK, SHOCK_MERGE, run_log


def test_merge_produces_two_paths():
    log = run_log(SHOCK_MERGE)

    left, right = extract_maximal_fronts(log, 1, 0.05, 0.2)

    assert [n.role for n in left.nodes] == [NodeRole.INITIAL, NodeRole.TRIPLE, NodeRole.OPEN_END]
    assert left.strengths == pytest.approx((-0.3, -0.6))
    assert left.max_strength == pytest.approx(0.6)
    assert left.t_plus == pytest.approx(3.0)
    assert not left.terminates
    assert [n.role for n in right.nodes] == [NodeRole.INITIAL, NodeRole.MERGE_IN]
    assert right.t_plus == pytest.approx(MERGE_TIME)
    assert (left.path_id, right.path_id) == (0, 1)


def test_high_threshold_keeps_only_the_merged_chain():
    log = run_log(SHOCK_MERGE)

    (path,) = extract_maximal_fronts(log, 1, 0.05, 0.5)

    assert len(path.segments) == 2


def test_segments_below_eps0_are_not_tracked():
    log = run_log(SHOCK_MERGE)

    assert extract_maximal_fronts(log, 1, 0.4, 0.5) != []
    assert shock_graph(log, 1, 0.4).number_of_nodes() == 1


def test_thresholds_must_be_ordered():
    log = run_log(SHOCK)

    with pytest.raises(ValueError):
        extract_maximal_fronts(log, 1, 0.2, 0.1)


def test_single_shock_is_one_open_path():
    log = run_log(SHOCK)

    (path,) = extract_maximal_fronts(log, 1, 0.05, 0.2)

    assert path.start.role is NodeRole.INITIAL
    assert path.end.role is NodeRole.OPEN_END
    assert path.speeds == pytest.approx((0.5,))
    assert list(path.to_frame()["role"]) == ["initial", "open_end"]


def test_rarefaction_has_no_shock_fronts():
    log = run_log(RAREFACTION)

    jumps = jump_set(log, 1, 0.05, 0.2)

    assert len(jumps) == 0
    assert jumps.to_frame().empty


def test_jump_set_queries():
    log = run_log(SHOCK_MERGE)

    jumps = jump_set(log, 1, 0.05, 0.2)

    assert set(log.initial_ids) <= jumps.segments
    assert len(segments_at(log, jumps, 1.0)) == 2
    assert len(segments_at(log, jumps, 2.0)) == 1
    assert terminal_drops(log, jumps) == {}


def test_finer_ladder_steps_contain_coarser_jump_sets():
    log = run_log(SHOCK_MERGE)

    coarse = jump_set(log, 1, 0.4, 0.5)
    fine = jump_set(log, 1, 0.05, 0.2)

    assert fine.issuperset(coarse)
    assert ladder_monotonicity(log, 1, [(0.4, 0.5), (0.05, 0.2)]) == []


def test_jump_set_from_another_family_is_rejected():
    log = run_log(SHOCK_MERGE)
    jumps = jump_set(log, 1, 0.05, 0.2)

    with pytest.raises(InconsistentJumpSetError):
        jump_balance_measure(log, 1, 0.1, 0.2, jumps)

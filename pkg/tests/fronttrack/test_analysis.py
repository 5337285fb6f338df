import numpy as np
import pytest

from fronttrack.analysis.characteristics import (
    CharacteristicPath,
    Selection,
    admissible_speed,
    characteristic,
    minimal_characteristic,
    states_around,
)
from fronttrack.analysis.decay import (
    ContDecayReport,
    DecayCheckTrace,
    DecayVerdict,
    check_cont_decay,
    check_positive_decay,
    union_length,
)
from fronttrack.analysis.exceptional import exceptional_times
from fronttrack.analysis.regions import CharRegion, boundary_flux, characteristic_region, region_balance_check, region_union
from fronttrack.analysis.wave_measure import SignedAtomicMeasure1D, wave_measure_at, wave_measure_before
from fronttrack.errors import BoundaryNotCharacteristicError, JumpSetMissingError
from fronttrack.genealogy.paths import jump_set

from mocking_objects.scenarios import INTERACTION_FREE, MERGE_TIME, RAREFACTION, SHOCK, SHOCK_MERGE, run_log


# --- wave measures ---


def test_signed_measure_merges_equal_positions():
    measure = SignedAtomicMeasure1D([0.5, 0.0, 0.5], [1.0, -2.0, 0.25])

    assert len(measure) == 2
    assert measure.mass([(0.4, 0.6)]) == pytest.approx(1.25)
    assert measure.mass([(-1.0, 0.1), (-0.5, 0.0)]) == pytest.approx(-2.0)
    assert measure.positive_part().total() == pytest.approx(1.25)
    assert measure.complement([(0.4, 0.6)]).total() == pytest.approx(-2.0)


def test_wave_measure_splits_into_jump_and_cont():
    log = run_log(SHOCK_MERGE)
    jumps = jump_set(log, 1, 0.05, 0.2)

    measures = wave_measure_at(log, 1.0, 1, jumps)

    assert measures.v.total() == pytest.approx(-0.6)
    assert measures.v.mass([(0.3, 0.4)]) == pytest.approx(-0.3)
    assert measures.jump.total() == pytest.approx(-0.6)
    assert len(measures.cont) == 0
    assert len(wave_measure_at(log, 2.0, 1).v) == 1


def test_wave_measure_is_right_continuous_at_events():
    log = run_log(SHOCK_MERGE)
    t = log.events[0].time

    assert len(wave_measure_before(log, t, 1).v) == 2
    assert len(wave_measure_at(log, t, 1).v) == 1


def test_split_needs_a_jump_set():
    log = run_log(RAREFACTION)

    with pytest.raises(JumpSetMissingError):
        wave_measure_at(log, 1.0, 1).jump
    with pytest.raises(ValueError):
        wave_measure_at(log, 5.0, 1)


def test_rarefaction_waves_are_positive():
    log = run_log(RAREFACTION)

    v = wave_measure_at(log, 1.0, 1).v

    assert v.positive_part().total() == pytest.approx(1.0)
    assert v.mass([(0.0, 0.5)]) == pytest.approx(0.5)


# --- exceptional times ---


def test_merge_time_is_the_only_exceptional_time():
    log = run_log(SHOCK_MERGE)

    (found,) = exceptional_times(log, ladder=[(0.05, 0.2)])

    assert found.t == pytest.approx(MERGE_TIME)
    assert found.mass == pytest.approx(0.09)
    assert found.families == (1,)
    assert found.attributions == ("interaction",)
    assert found.to_dict()["families"] == [1]


def test_interaction_free_run_has_no_exceptional_times():
    log = run_log(INTERACTION_FREE)

    assert exceptional_times(log, ladder=[(0.05, 0.2)]) == []


def test_threshold_filters_small_atoms():
    log = run_log(SHOCK_MERGE)

    assert exceptional_times(log, ladder=[(0.05, 0.2)], jump_threshold=0.1) == []


# --- characteristics ---


def test_characteristic_runs_into_the_shock_and_sticks():
    log = run_log(SHOCK)
    shock_id = log.initial_ids[0]

    path = minimal_characteristic(log, 0.0, -0.5, 1, 2.0)

    np.testing.assert_allclose(path.times, [0.0, 1.0, 2.0])
    np.testing.assert_allclose(path.positions, [-0.5, 0.5, 1.0])
    assert path.riding == (None, shock_id)
    assert path.at(1.5) == pytest.approx(0.75)
    assert list(path.to_frame().columns) == ["t", "x", "front"]


def test_characteristic_inside_a_constant_region_is_straight():
    log = run_log(RAREFACTION)

    path = characteristic(log, 0.0, 0.3, 1, 2.0, Selection.MAXIMAL)

    assert path.t_end == pytest.approx(2.0)
    assert path.at(2.0) == pytest.approx(2.3)
    assert admissible_speed(log, 1.0, 1.3, 1, 1.0)
    assert not admissible_speed(log, 1.0, 1.3, 1, 0.5)


def test_characteristic_must_stay_inside_the_run():
    log = run_log(RAREFACTION)

    with pytest.raises(ValueError):
        characteristic(log, 0.0, 0.0, 1, 5.0)


def test_states_around_a_shock():
    log = run_log(SHOCK)

    left, right = states_around(log, 1.0, 0.5)

    assert left[0] == pytest.approx(1.0)
    assert right[0] == pytest.approx(0.0)


# --- decay ---


def test_union_length_counts_overlaps_once():
    assert union_length([(0.0, 1.0), (0.5, 2.0), (3.0, 3.5)]) == pytest.approx(2.5)
    assert union_length([]) == 0.0


def test_positive_decay_on_a_rarefaction():
    log = run_log(RAREFACTION)

    wide, narrow = check_positive_decay(log, 1, 0.0, 1.0, [[(0.0, 1.0)], [(0.0, 0.3)]])

    assert wide.lhs == pytest.approx(1.0)
    assert wide.rhs == pytest.approx(1.1)
    assert wide.passed
    assert narrow.lhs == pytest.approx(0.25)
    assert narrow.passed
    (strict,) = check_positive_decay(log, 1, 0.0, 1.0, [[(0.0, 1.0)]], constant=0.5)
    assert not strict.passed


def test_positive_decay_needs_ordered_times():
    log = run_log(RAREFACTION)

    with pytest.raises(ValueError):
        check_positive_decay(log, 1, 1.0, 0.5, [[(0.0, 1.0)]])


def test_cont_decay_on_a_rarefaction():
    log = run_log(RAREFACTION)

    (report,) = check_cont_decay(log, 1, 0.0, 1.5, [[(-0.5, 0.5)]], 0.05, 0.2)

    assert report.verdict.lhs == pytest.approx(-1.0)
    assert report.passed
    assert len(report.traces) == 1
    assert report.to_dict()["check"] == "cont_decay"


# with eps0 above both strengths the two merging shocks are continuous compression of mass -0.6;
# the right boundary is caught by the merged shock at t = 2.5 and the length then shrinks at -0.3
def test_cont_decay_case_split_follows_the_run_parameter():
    default = run_log(SHOCK_MERGE)
    wide = run_log({**SHOCK_MERGE, "run": {**SHOCK_MERGE["run"], "case_split": 0.75}})

    (first,) = check_cont_decay(default, 1, 0.0, 3.0, [[(-1.0, 0.5)]], 0.7, 1.4)
    (second,) = check_cont_decay(wide, 1, 0.0, 3.0, [[(-1.0, 0.5)]], 0.7, 1.4)

    assert first.traces[0].v_cont[0] == pytest.approx(-0.6)
    assert first.traces[0].case == 1
    (trace,) = second.traces
    assert trace.case == 2
    assert trace.case_time == pytest.approx(2.5)
    assert second.region_icj == [pytest.approx(0.09)]
    assert second.unexplained_case_2 == []


def _trace(v_cont: float, case: int) -> DecayCheckTrace:
    times = np.array([0.0, 1.0])
    return DecayCheckTrace(
        interval=(0.0, 1.0),
        times=times,
        z=np.array([1.0, 1.0]),
        speed_a=np.zeros(2),
        speed_b=np.zeros(2),
        xi=np.zeros(2),
        v_cont=np.array([v_cont, v_cont]),
        v_jump=np.zeros(2),
        collapse_time=None,
        case=case,
        case_time=0.0 if case == 2 else None,
    )


def test_compressive_second_branch_needs_icj_mass():
    verdict = DecayVerdict("cont_decay", 1, ((0.0, 1.0),), 0.5, 4.0)
    traces = [_trace(-0.5, 2), _trace(0.0, 2), _trace(-0.5, 1), _trace(-0.5, 2)]

    report = ContDecayReport(verdict, traces, [0.0, 0.0, 0.0, 0.2])

    # an empty window is trivially on the second branch
    assert report.unexplained_case_2 == [0]


# --- regions ---


def test_overlapping_intervals_are_rejected():
    log = run_log(SHOCK_MERGE)

    with pytest.raises(ValueError):
        region_union(log, 1, 0.0, 1.0, [(-1.0, 0.5), (0.0, 1.0)])


def test_balance_on_a_region_holding_the_merge():
    log = run_log(SHOCK_MERGE)
    region = characteristic_region(log, 1, 0.0, 3.0, -3.0, 3.0)

    report = region_balance_check(log, 1, region, 0.05, 0.2)

    assert report.identities_hold
    assert report.passed
    assert report.delta_v_physical == pytest.approx(0.0, abs=1e-12)
    assert report.mu_ic_region == pytest.approx(0.09)
    assert report.ledger.atoms == []
    assert report.to_dict()["passed"] is True


def test_boundary_that_is_not_a_characteristic_is_rejected():
    log = run_log(SHOCK)
    a = CharacteristicPath(1, Selection.MINIMAL, np.array([0.0, 2.0]), np.array([-1.0, 9.0]), (None,))
    b = characteristic(log, 0.0, 10.0, 1, 2.0)
    region = CharRegion(1, 0.0, 2.0, a, b)

    with pytest.raises(BoundaryNotCharacteristicError):
        boundary_flux(log, region, 1, 0.05, 0.2)

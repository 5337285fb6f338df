import numpy as np
import pytest

from fronttrack.engine.records import INITIAL_NODE
from fronttrack.measures.atomic import Atom, AtomicSpaceTimeMeasure, combine_atoms
from fronttrack.measures.balance import icj_measure, jump_balance_measure, wave_balance_measure
from fronttrack.measures.glimm import glimm_series, interaction_potential
from fronttrack.measures.interaction import interaction_amounts, interaction_measures

from mocking_objects.scenarios import FAN_CATCHES_SHOCK, INTERACTION_FREE, MERGE_TIME, RAREFACTION, SHOCK_MERGE, run_log


def test_interaction_amounts():
    assert interaction_amounts(1, -0.3, 1, -0.3) == pytest.approx((0.09, 0.09))
    # opposite signs of one family cancel
    assert interaction_amounts(1, 0.2, 1, -0.5) == pytest.approx((0.1, 0.5))
    assert interaction_amounts(2, 0.2, 1, -0.5) == pytest.approx((0.1, 0.1))


def test_atomic_measure_masses_and_restrictions():
    measure = AtomicSpaceTimeMeasure(
        [Atom(0.5, 0.0, 1.0, 0, "a"), Atom(1.0, 1.0, -0.25, 1, "a"), Atom(2.0, -1.0, 0.5, 2, "a")],
        name="m",
    )

    assert measure.total() == pytest.approx(1.25)
    assert measure.positive_mass() == pytest.approx(1.5)
    assert measure.negative_mass() == pytest.approx(0.25)
    assert measure.total_variation() == pytest.approx(1.75)
    assert len(measure.restrict(t_range=(0.0, 1.0))) == 2
    assert len(measure.restrict(x_range=(0.0, 2.0))) == 2
    assert measure.restrict_events([2]).total() == pytest.approx(0.5)
    assert measure.positive_part().total() == pytest.approx(1.5)
    assert list(measure.time_marginal().index) == [0.5, 1.0, 2.0]


def test_combine_atoms_adds_on_shared_points():
    a = AtomicSpaceTimeMeasure([Atom(1.0, 0.0, 0.5, 3, "x")])
    b = AtomicSpaceTimeMeasure([Atom(1.0, 0.0, -0.25, 3, "y"), Atom(2.0, 0.0, 1.0, 4, "y")])

    merged = combine_atoms("c", [(a, False), (b, True)], kind="c")

    assert len(merged) == 2
    assert merged.weight_at_event(3) == pytest.approx(0.75)
    assert set(merged.kind) == {"c"}


def test_frame_round_trip_keeps_atoms():
    log = run_log(SHOCK_MERGE)
    mu_i, _ = interaction_measures(log)

    again = AtomicSpaceTimeMeasure.from_frame(mu_i.to_frame(), name=mu_i.name)

    assert list(again) == list(mu_i)


def test_shock_merge_interaction_atoms():
    log = run_log(SHOCK_MERGE)

    mu_i, mu_ic = interaction_measures(log)

    (atom,) = list(mu_i)
    assert atom.t == pytest.approx(MERGE_TIME)
    assert atom.weight == pytest.approx(0.09)
    assert mu_ic.total() == pytest.approx(0.09)


def test_no_events_means_no_atoms():
    log = run_log(INTERACTION_FREE)

    mu_i, mu_ic = interaction_measures(log)

    assert len(mu_i) == 0
    assert len(mu_ic) == 0
    assert len(wave_balance_measure(log, 1)[0]) == 0


def test_interaction_potential_counts_approaching_pairs():
    families = np.array([1, 1, 1])
    sizes = np.array([0.3, 0.3, 0.1])
    shocks = np.array([True, True, False])

    # the shock pair plus the fan behind each shock
    assert interaction_potential(families, sizes, shocks) == pytest.approx(0.09 + 0.03 + 0.03)
    assert interaction_potential(np.array([1, 2]), np.array([0.5, 0.5]), np.array([False, False])) == 0.0
    assert interaction_potential(np.array([2, 1]), np.array([0.5, 0.5]), np.array([False, False])) == pytest.approx(0.25)


def test_glimm_functional_drops_at_the_merge():
    log = run_log(SHOCK_MERGE)

    series = glimm_series(log)

    assert series.monotone
    assert series.initial.V == pytest.approx(0.6)
    assert series.initial.Q == pytest.approx(0.09)
    assert series.initial.upsilon == pytest.approx(0.6 + 16.0 * 0.09)
    after = series.at(2.0)
    assert after.Q == pytest.approx(0.0)
    assert after.V == pytest.approx(0.6)
    assert len(series.to_frame()) == 2


def test_wave_balance_of_a_merge_is_zero():
    log = run_log(SHOCK_MERGE)

    mu_1, rho_1 = wave_balance_measure(log, 1)

    (atom,) = list(mu_1)
    assert atom.weight == pytest.approx(0.0, abs=1e-12)
    assert len(rho_1) == 0


def test_jump_balance_records_a_triple_point():
    log = run_log(SHOCK_MERGE)

    q = jump_balance_measure(log, 1, 0.05, 0.2)

    *_, triple = list(q)
    assert triple.kind == "triple"
    assert triple.t == pytest.approx(MERGE_TIME)
    assert triple.weight == pytest.approx(0.0, abs=1e-12)


def test_tracked_initial_shocks_carry_their_strength_on_the_initial_line():
    log = run_log(SHOCK_MERGE)

    q = jump_balance_measure(log, 1, 0.05, 0.2)

    initial = [a for a in q if a.kind == "initial"]
    assert [(a.t, a.x) for a in initial] == [(0.0, -0.5), (0.0, 0.0)]
    assert [a.weight for a in initial] == pytest.approx([-0.3, -0.3])
    assert all(a.event_id == INITIAL_NODE for a in initial)
    assert q.by_event() == {log.events[0].id: pytest.approx(0.0, abs=1e-12)}
    # 0.09 of interaction plus the two initial atoms
    assert icj_measure(log, 1, 0.05, 0.2).total() == pytest.approx(0.69)


def test_jump_balance_of_a_front_dropped_below_eps0_telescopes_to_zero():
    log = run_log(FAN_CATCHES_SHOCK)

    q = jump_balance_measure(log, 1, 0.3, 0.4)

    assert [a.kind for a in q] == ["initial", "continuation", "terminal"]
    assert [a.weight for a in q] == pytest.approx([-0.5, 0.125, 0.375], abs=1e-9)
    assert [a.t for a in q] == pytest.approx([0.0, 4.0 / 3.0, 8.0 / 3.0], abs=1e-6)
    assert q.total() == pytest.approx(0.0, abs=1e-12)


def test_untracked_initial_front_has_no_jump_atom():
    log = run_log(FAN_CATCHES_SHOCK)

    q = jump_balance_measure(log, 1, 0.6, 0.7)

    assert len(q) == 0


def test_rarefaction_has_no_jump_atoms():
    log = run_log(RAREFACTION)

    assert len(jump_balance_measure(log, 1, 0.05, 0.2)) == 0

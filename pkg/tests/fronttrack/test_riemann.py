import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fronttrack.errors import OutOfDomainError
from fronttrack.model.curves import lax_composite
from fronttrack.model.systems import burgers, p_system
from fronttrack.riemann.admissibility import lax_check
from fronttrack.riemann.simplified import solve_simplified
from fronttrack.riemann.solver import discretize_rarefaction, solve_riemann, sub_jump_count
from fronttrack.riemann.waves import SolverKind, WaveKind

burgers_states = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False, allow_infinity=False)


def test_burgers_shock():
    fan = solve_riemann(burgers(), np.array([1.0]), np.array([0.0]))

    (wave,) = fan.waves
    assert wave.kind is WaveKind.SHOCK
    assert wave.strength == pytest.approx(-1.0)
    assert wave.speed == pytest.approx(0.5)
    assert lax_check(burgers(), wave).admissible


def test_burgers_rarefaction_is_split_into_equal_jumps():
    fan = solve_riemann(burgers(), np.array([0.0]), np.array([1.0]), nu=0.25)

    (wave,) = fan.waves
    jumps = wave.jumps()
    assert wave.kind is WaveKind.RAREFACTION_FAN
    assert len(jumps) == 4
    assert [j.speed for j in jumps] == pytest.approx([0.125, 0.375, 0.625, 0.875], abs=1e-9)
    np.testing.assert_array_equal(jumps[-1].right_state, [1.0])


def test_sub_jump_count_keeps_exact_multiples():
    assert sub_jump_count(1.0, 0.25) == 4
    assert sub_jump_count(1.01, 0.25) == 5
    assert sub_jump_count(0.01, 0.25) == 1


@given(u_l=burgers_states, u_r=burgers_states)
@settings(max_examples=50, deadline=None)
def test_burgers_strength_is_the_jump(u_l, u_r):
    fan = solve_riemann(burgers(), np.array([u_l]), np.array([u_r]), nu=0.1)

    assert fan.strengths[0] == pytest.approx(u_r - u_l, abs=1e-12)
    for wave in fan.waves:
        pieces = wave.jumps()
        assert sum(j.strength for j in pieces) == pytest.approx(wave.strength, abs=1e-12)
        if wave.kind is WaveKind.RAREFACTION_FAN:
            assert all(j.strength <= 0.1 + 1e-12 for j in pieces)


def test_p_system_recovers_the_strengths_it_was_built_from():
    model = p_system()
    left = np.array([1.0, 0.0])
    right = lax_composite(model, left, [0.08, -0.06])[-1]

    fan = solve_riemann(model, left, right)

    np.testing.assert_allclose(fan.strengths, [0.08, -0.06], atol=1e-8)
    assert [w.kind for w in fan.waves] == [WaveKind.RAREFACTION_FAN, WaveKind.SHOCK]


def test_p_system_waves_are_ordered_by_speed():
    fan = solve_riemann(p_system(), np.array([1.0, 0.1]), np.array([1.0, -0.1]), nu=0.02)

    speeds = [s for w in fan.waves for s in w.speeds]
    assert speeds == sorted(speeds)
    assert all(w.kind is WaveKind.SHOCK for w in fan.waves)


def test_states_outside_the_box_are_rejected():
    with pytest.raises(OutOfDomainError):
        solve_riemann(burgers(), np.array([0.0]), np.array([3.0]))


def test_discretize_rarefaction_rounds_the_jump_count_up():
    (wave,) = solve_riemann(burgers(), np.array([0.0]), np.array([1.0])).waves

    jumps = discretize_rarefaction(burgers(), wave, 0.3)

    assert [j.strength for j in jumps] == pytest.approx([0.25] * 4)
    assert [j.speed for j in jumps] == pytest.approx([0.125, 0.375, 0.625, 0.875], abs=1e-9)
    np.testing.assert_array_equal(jumps[-1].right_state, [1.0])


def test_discretize_rarefaction_rejects_shocks():
    (wave,) = solve_riemann(burgers(), np.array([1.0]), np.array([0.0])).waves

    with pytest.raises(ValueError):
        discretize_rarefaction(burgers(), wave, 0.1)


def test_simplified_solver_sends_the_mismatch_to_a_non_physical_front():
    model = burgers()

    fan = solve_simplified(model, np.array([1.0]), np.array([0.75]), [(1, -0.3), (model.np_family, 0.01)])

    shock, remainder = fan.waves
    assert fan.solver is SolverKind.SIMPLIFIED
    assert shock.kind is WaveKind.SHOCK
    assert shock.strength == pytest.approx(-0.3)
    assert remainder.kind is WaveKind.NON_PHYSICAL
    assert remainder.strength == pytest.approx(0.05, abs=1e-10)
    assert remainder.speed > 2.0

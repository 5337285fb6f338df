import math

import numpy as np
import pytest

from fronttrack.engine.initial import RiemannDatum, StepsDatum
from fronttrack.engine.params import RunParams
from fronttrack.errors import NotScalarError
from fronttrack.evaluation.oracle import (
    breaking_time,
    convergence_study,
    empirical_order,
    first_shock_time,
    l1_error,
    oracle_burgers,
    oracle_solution,
    refinement_shift,
    sample_run,
)
from fronttrack.model.systems import burgers, p_system

from mocking_objects.scenarios import RAMP, SHOCK, run_log, scenario

SHOCK_DATUM = RiemannDatum(np.array([1.0]), np.array([0.0]))
FAN_DATUM = RiemannDatum(np.array([0.0]), np.array([1.0]))


def test_burgers_shock_sits_at_half_t():
    solution = oracle_solution(burgers(), SHOCK_DATUM, 1.0, grid=2048)

    ((location, jump),) = solution.shocks()
    assert location == pytest.approx(0.5, abs=2 * solution.dx)
    assert jump == pytest.approx(-1.0, abs=0.05)
    assert solution.satisfies_oleinik()


def test_oracle_burgers_uses_the_burgers_flux():
    direct = oracle_solution(burgers(), SHOCK_DATUM, 1.0, grid=512)

    solution = oracle_burgers(SHOCK_DATUM, 1.0, grid=512)

    np.testing.assert_array_equal(solution.u, direct.u)


def test_burgers_fan_is_x_over_t():
    solution = oracle_solution(burgers(), FAN_DATUM, 2.0, grid=2048)

    inside = (solution.x > 0.2) & (solution.x < 1.8)
    np.testing.assert_allclose(solution.u[inside], solution.x[inside] / 2.0, atol=1e-3)
    assert solution.shocks() == []
    assert solution.oleinik_ratio() <= 1.0 + 1e-9


def test_step_datum_primitive_is_exact_between_breakpoints():
    datum = StepsDatum((0.0, 1.0), (np.array([0.0]), np.array([1.0]), np.array([0.0])))

    solution = oracle_solution(burgers(), datum, 0.5, grid=2048)

    # fan from 0 and a shock from 1 with speed 1/2 have not met yet
    inside = (solution.x > 0.1) & (solution.x < 0.4)
    np.testing.assert_allclose(solution.u[inside], solution.x[inside] / 0.5, atol=1e-3)
    ((location, _),) = solution.shocks()
    assert location == pytest.approx(1.25, abs=2 * solution.dx)


def test_oracle_needs_a_scalar_law():
    datum = RiemannDatum(np.array([1.0, 0.0]), np.array([1.0, 0.1]))

    with pytest.raises(NotScalarError):
        oracle_solution(p_system(), datum, 1.0)


def test_oracle_needs_positive_time():
    with pytest.raises(ValueError):
        oracle_solution(burgers(), SHOCK_DATUM, 0.0)


def test_sampled_run_is_right_continuous():
    log = run_log(SHOCK)

    values = sample_run(log, 1.0, np.array([-1.0, 0.4, 0.5, 0.6]))

    np.testing.assert_allclose(values, [1.0, 1.0, 0.0, 0.0])


def test_l1_error_of_the_tracked_shock_is_grid_sized():
    log = run_log(SHOCK)
    solution = oracle_solution(burgers(), SHOCK_DATUM, 1.0, grid=2048)

    assert l1_error(log, solution) <= 10 * solution.dx


def test_empirical_order():
    assert empirical_order([0.2, 0.1, 0.05], [0.2, 0.1, 0.05]) == pytest.approx(1.0)
    assert empirical_order([0.2, 0.1], [0.1, 0.0]) == math.inf


def test_fan_converges_at_first_order():
    params = [RunParams(nu=nu, horizon=1.0) for nu in (0.1, 0.05, 0.025)]

    report = convergence_study(burgers(), FAN_DATUM, params, 1.0, grid=8192)

    assert report.nus == (0.1, 0.05, 0.025)
    assert report.decreasing
    assert report.order == pytest.approx(1.0, abs=0.15)
    assert report.passed
    # a staircase of steps nu under u = x on a unit-wide fan
    assert report.errors[0] == pytest.approx(0.1 / 4.0, rel=0.1)


@pytest.mark.slow
def test_centred_fan_converges_at_first_order():
    datum = RiemannDatum(np.array([-0.5]), np.array([0.5]))
    params = [RunParams(nu=nu, horizon=1.0) for nu in (0.1, 0.05, 0.025)]

    report = convergence_study(burgers(), datum, params, 1.0, grid=8192)

    assert report.passed, report.to_dict()
    assert report.errors[-1] == pytest.approx(0.025 / 4.0, rel=0.15)


def test_convergence_study_rejects_short_runs():
    with pytest.raises(ValueError):
        convergence_study(burgers(), FAN_DATUM, [RunParams(nu=0.1, horizon=0.5)], 1.0, grid=256)


def test_refinement_keeps_the_shock_in_place():
    shift, dx = refinement_shift(burgers(), SHOCK_DATUM, 1.0, grid=1024)

    assert shift <= dx


def test_ramp_breaks_at_two_and_a_half():
    datum = scenario(RAMP).build_datum()

    assert breaking_time(burgers(), datum) == pytest.approx(2.5, rel=1e-6)


@pytest.mark.slow
def test_first_shock_time_brackets_the_breaking_time():
    datum = scenario(RAMP).build_datum()

    onset = first_shock_time(burgers(), datum, 1.0, 4.0, amplitude=0.2, grid=1024)

    assert onset == pytest.approx(2.5, abs=0.05)

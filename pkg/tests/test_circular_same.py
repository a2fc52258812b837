import math

import numpy as np
import pytest

from CoreModel import ScenarioParams
from CircularPincer import CircularPincer
from CircularSame import CircularSame
from Exceptions import EndgameInfeasible, SubcriticalVelocity
from TrajectoryPlan import LINEAR_LEG


REFERENCE_SPEED = 42.416


def test_critical_velocity_reference(reference):
    critical = CircularSame.critical_velocity(reference)
    assert critical.linearized == pytest.approx(CircularPincer.critical_velocity(reference) + reference.V_T)
    assert critical.exact == pytest.approx((math.pi + math.asin(0.1)) * 10)
    # линеаризация арксинуса: asin(x) ~ x
    assert critical.exact == pytest.approx(critical.linearized, rel=1e-3)


def test_coefficients_reference(reference):
    c1, c2 = CircularSame.coefficients(reference, 40.0)
    assert c1 == pytest.approx(-9.5122, abs=1e-4)
    assert c2 == pytest.approx(1 + math.pi / 41)


def test_reference_cycle(reference):
    radii = CircularSame.radius_sequence(reference, REFERENCE_SPEED)
    assert radii[1] == pytest.approx(97.697, abs=1e-3)
    assert CircularSame.iteration_count(reference, REFERENCE_SPEED) == 20
    game = CircularSame.endgame(reference, REFERENCE_SPEED)
    assert game.T_linear == pytest.approx(0.05452, abs=1e-5)
    assert game.t + game.t_tilde == pytest.approx(game.T_linear, rel=1e-12)


def test_subcritical_speed_rejected(reference):
    with pytest.raises(SubcriticalVelocity):
        CircularSame.radius_sequence(reference, 32.0)


def test_min_delta_v_reference(reference):
    assert CircularSame.min_delta_v(reference) == pytest.approx(-28.69, abs=0.01)


@pytest.mark.parametrize('n', [2, 8, 32])
@pytest.mark.parametrize('alpha', [2.0, 3.5, 10.0, 47.0, 100.0])
def test_min_delta_v_is_larger_root(n, alpha):
    params = ScenarioParams(R0=alpha * 10.0, r=10.0, V_T=1.0, n=n)
    a, b, c = CircularSame.delta_v_quadratic(params)
    roots = np.roots([a, b, c])
    larger = max(roots.real)
    assert CircularSame.min_delta_v(params) == pytest.approx(larger, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize('n', [2, 8, 32])
def test_min_delta_v_decreases_with_alpha(n):
    alphas = np.linspace(2.0, 100.0, 50)
    values = [CircularSame.min_delta_v(ScenarioParams(R0=a * 10.0, r=10.0, V_T=1.0, n=n)) for a in alphas]
    assert all(x > y for x, y in zip(values, values[1:]))


@pytest.mark.parametrize('n', [2, 4, 16])
@pytest.mark.parametrize('factor', [1.001, 1.05, 1.5, 3.0])
def test_endgame_margin_equivalence(reference, n, factor):
    params = reference.with_n(n)
    V_s = factor * CircularSame.critical_velocity(params).linearized
    game = CircularSame.endgame(params, V_s, check=False)
    direct = (2 * params.r - game.R_last) / params.V_T > game.T_linear
    assert CircularSame.endgame_margin_holds(params, V_s) == direct


def test_endgame_infeasible_for_large_swarm_near_critical():
    params = ScenarioParams(R0=10.5, r=10.0, V_T=1.0, n=32)
    V_s = 1.21
    assert not CircularSame.endgame_margin_holds(params, V_s)
    with pytest.raises(EndgameInfeasible):
        CircularSame.endgame(params, V_s)
    with pytest.raises(EndgameInfeasible):
        CircularSame.total_time(params, V_s)


@pytest.mark.parametrize('n', [2, 4, 8, 16])
@pytest.mark.parametrize('dV', [5.0, 10.0, 20.0, 35.0])
def test_closed_form_matches_accumulation(reference, n, dV):
    params = reference.with_n(n)
    V_s = CircularSame.critical_velocity(params).linearized + dV
    radii = CircularSame.radius_sequence(params, V_s)
    N = len(radii) - 1
    closed = CircularSame.radius_closed_form(params, V_s, np.arange(N + 1))
    np.testing.assert_allclose(closed, radii, rtol=1e-9, atol=1e-9 * params.R0)

    report = CircularSame.time_breakdown(params, V_s)
    T_circular = sum(2 * math.pi * R / (n * V_s) for R in radii[:-1]) + report.T_last
    T_in = sum((a - b) / V_s for a, b in zip(radii[:-2], radii[1:-1])) + radii[-1] / V_s
    np.testing.assert_allclose(report.T_circular, T_circular, rtol=1e-9)
    np.testing.assert_allclose(report.T_in, T_in, rtol=1e-9)
    assert report.T_total == pytest.approx(T_circular + T_in + report.T_linear, rel=1e-12)


@pytest.mark.parametrize('n', [2, 6])
def test_plan_duration_equals_total_time(reference, n):
    params = reference.with_n(n)
    V_s = CircularSame.critical_velocity(params).linearized + 10
    plan = CircularSame.trajectory_plan(params, V_s)
    assert plan.total_duration == pytest.approx(CircularSame.total_time(params, V_s), rel=1e-9)
    assert plan.kinds()[-2:] == [LINEAR_LEG, LINEAR_LEG]


def test_plan_last_pass_ends_facing_up(reference):
    V_s = REFERENCE_SPEED
    plan = CircularSame.trajectory_plan(reference, V_s)
    before_linear = sum(phase.duration for phase in plan.phases[:-2])
    x, y, _ = plan.pose_at(before_linear)[0]
    assert x == pytest.approx(0.0, abs=1e-9)
    assert y == pytest.approx(reference.r)


def test_linear_legs_return_to_the_left(reference):
    V_s = REFERENCE_SPEED
    plan = CircularSame.trajectory_plan(reference, V_s)
    game = CircularSame.endgame(reference, V_s)
    start = sum(phase.duration for phase in plan.phases[:-2])
    x0 = plan.pose_at(start)[0][0]
    x_end = plan.pose_at(plan.total_duration)[0][0]
    assert x_end - x0 == pytest.approx((game.t - game.t_tilde) * V_s)


def test_printed_total_time_is_compared_with_component_sum(reference):
    V_s = REFERENCE_SPEED
    report = CircularSame.time_breakdown(reference, V_s)
    printed = CircularSame.printed_total_time(reference, V_s, report.N_n)
    assert math.isfinite(printed)
    diagnostic = CircularSame.formula_discrepancy(reference, V_s)
    if diagnostic is None:
        assert printed == pytest.approx(report.T_total, rel=CircularSame.TOLERANCE)
    else:
        assert diagnostic.printed == printed
        assert diagnostic.component_sum == report.T_total
        assert diagnostic.relative_gap > CircularSame.TOLERANCE


def test_formula_discrepancy_reported_but_component_sum_wins(reference, monkeypatch):
    V_s = REFERENCE_SPEED
    expected = CircularSame.time_breakdown(reference, V_s).T_total
    monkeypatch.setattr(CircularSame, "printed_total_time", staticmethod(lambda params, V, N: 2 * expected))
    diagnostic = CircularSame.formula_discrepancy(reference, V_s)
    assert diagnostic is not None
    assert diagnostic.relative_gap == pytest.approx(1.0)
    assert "differs from component sum" in str(diagnostic)
    assert CircularSame.total_time(reference, V_s) == expected


def test_matching_formula_gives_no_diagnostic(reference, monkeypatch):
    V_s = REFERENCE_SPEED
    expected = CircularSame.time_breakdown(reference, V_s).T_total
    monkeypatch.setattr(CircularSame, "printed_total_time", staticmethod(lambda params, V, N: expected))
    assert CircularSame.formula_discrepancy(reference, V_s) is None

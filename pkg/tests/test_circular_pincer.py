import math

import numpy as np
import pytest

from CoreModel import CoreModel, ScenarioParams
from CircularPincer import CircularPincer
from Exceptions import SubcriticalVelocity
from TrajectoryPlan import ARC, DIRECTION_SWITCH, INWARD_ADVANCE


GRID_N = [2, 4, 8, 16]
GRID_DV = [1.0, 5.0, 10.0, 35.0]


def test_critical_velocity_reference(reference):
    np.testing.assert_allclose(CircularPincer.critical_velocity(reference), 31.41592653589793, rtol=1e-15)


def test_critical_velocity_is_twice_lower_bound(reference):
    assert CircularPincer.critical_velocity(reference) == pytest.approx(
        2 * CoreModel.lower_bound_velocity(reference), rel=1e-12)


def test_iteration_count_reference(reference):
    assert CircularPincer.iteration_count(reference, 40.0) == 20
    assert len(CircularPincer.radius_sequence(reference, 40.0)) - 1 == 20


def test_coefficients_reference(reference):
    c1, c2 = CircularPincer.coefficients(reference, 40.0)
    assert c1 == pytest.approx(-400 / 41)
    assert c2 == pytest.approx(1.0766243, rel=1e-7)


def test_subcritical_speed_rejected(reference):
    with pytest.raises(SubcriticalVelocity):
        CircularPincer.radius_sequence(reference, 31.0)
    with pytest.raises(SubcriticalVelocity):
        CircularPincer.time_breakdown(reference, CircularPincer.critical_velocity(reference))


def test_radius_sequence_decreases_to_sensor(reference):
    radii = CircularPincer.radius_sequence(reference, 35.0)
    assert radii[0] == reference.R0
    assert all(a > b for a, b in zip(radii, radii[1:]))
    assert radii[-1] <= reference.r < radii[-2]


@pytest.mark.parametrize('n', GRID_N)
@pytest.mark.parametrize('dV', GRID_DV)
def test_closed_form_matches_accumulation(reference, n, dV):
    params = reference.with_n(n)
    V_s = CircularPincer.critical_velocity(params) + dV
    radii = CircularPincer.radius_sequence(params, V_s)
    N = len(radii) - 1
    assert CircularPincer.iteration_count(params, V_s) == N

    closed = CircularPincer.radius_closed_form(params, V_s, np.arange(N + 1))
    np.testing.assert_allclose(closed, radii, rtol=1e-9, atol=1e-9 * params.R0)

    T_circular = sum(2 * math.pi * R / (n * V_s) for R in radii[:-1]) + 2 * math.pi * params.r / (n * V_s)
    T_in = sum((a - b) / V_s for a, b in zip(radii[:-2], radii[1:-1])) + radii[-1] / V_s
    report = CircularPincer.time_breakdown(params, V_s)
    np.testing.assert_allclose(report.T_circular, T_circular, rtol=1e-9)
    np.testing.assert_allclose(report.T_in, T_in, rtol=1e-9)
    np.testing.assert_allclose(report.T_total, T_circular + T_in, rtol=1e-9)


@pytest.mark.parametrize('n', [2, 6])
def test_plan_duration_equals_total_time(reference, n):
    params = reference.with_n(n)
    V_s = 1.1 * CircularPincer.critical_velocity(params)
    plan = CircularPincer.trajectory_plan(params, V_s)
    report = CircularPincer.time_breakdown(params, V_s)
    assert plan.total_duration == pytest.approx(report.T_total, rel=1e-9)
    kinds = plan.kinds()
    assert kinds[:3] == [ARC, DIRECTION_SWITCH, INWARD_ADVANCE]
    assert kinds[-1] == ARC
    assert kinds.count(ARC) == report.N_n + 1


def test_plan_start_places_pairs_back_to_back(reference):
    plan = CircularPincer.trajectory_plan(reference, 35.0)
    poses = plan.pose_at(0.0)
    np.testing.assert_allclose(poses[0], poses[1])
    np.testing.assert_allclose(poses[0], [reference.R0, 0.0, 0.0], atol=1e-12)


def test_guard_plan_ignores_speed(reference):
    plan = CircularPincer.trajectory_plan(reference, 5.0, enforce=False, max_cycles=3)
    assert plan.kinds().count(ARC) == 3
    assert plan.total_duration == pytest.approx(3 * math.pi * reference.R0 / 5.0)


def test_time_decreases_with_speed(reference):
    V_c = CircularPincer.critical_velocity(reference)
    times = [CircularPincer.time_breakdown(reference, V_c + dV).T_total for dV in (5, 10, 20, 35)]
    assert all(a > b for a, b in zip(times, times[1:]))


def test_iteration_count_never_below_one():
    params = ScenarioParams(R0=11.0, r=10.0, V_T=1.0, n=2)
    assert CircularPincer.iteration_count(params, 1000.0) >= 1

import math

import pytest

from CoreModel import CoreModel, ScenarioParams
from SpiralPincer import SpiralPincer
from SpiralSame import SpiralSame, VERBATIM, BAND
from Exceptions import LinearScanInfeasible, RadiusTooSmall, SeedDomain, SubcriticalVelocity
from TrajectoryPlan import LINEAR_LEG, SPIRAL_IN, SPIRAL_OUT


@pytest.fixture
def critical(reference):
    return SpiralSame.solve_phi_and_critical_velocity(reference)


def test_critical_solution_satisfies_confinement(reference, critical):
    R0, r, V_T = reference.R0, reference.r, reference.V_T
    assert 0 < critical.phi_0 < math.pi / 2
    H = SpiralSame.confinement_residual(critical.V_c, critical.phi_0, R0, reference)
    assert abs(H) < 1e-9 * (R0 - r)

    t_main = SpiralSame.main_sweep_time(R0, reference, critical.V_c)
    solution = SpiralSame.solve_phi_at_radius(R0, reference, critical.V_c)
    assert V_T * (t_main + solution.t_phi) == pytest.approx(2 * r, abs=1e-9 * r)


def test_tip_lies_on_wavefront(reference, critical):
    gap = SpiralSame.wavefront_gap(critical.phi_0, reference.R0, reference, critical.V_c)
    assert abs(float(gap)) < 1e-9 * reference.R0


def test_faster_than_spiral_pincer(reference, critical):
    assert critical.V_c > SpiralPincer.critical_velocity(reference)
    assert critical.V_c > CoreModel.lower_bound_velocity(reference)


def test_residual_derivatives_match_finite_differences(reference, critical):
    V, phi, R = critical.V_c + 2, critical.phi_0, reference.R0
    h = 1e-6

    def H(V_s, angle):
        return SpiralSame.confinement_residual(V_s, angle, R, reference)

    dv = (H(V + h, phi) - H(V - h, phi)) / (2 * h)
    dphi = (H(V, phi + h) - H(V, phi - h)) / (2 * h)
    assert SpiralSame.confinement_residual_dv(V, phi, R, reference) == pytest.approx(dv, rel=1e-5)
    assert SpiralSame.confinement_residual_dphi(V, phi, R, reference) == pytest.approx(dphi, rel=1e-5)


def test_seed_domain():
    with pytest.raises(SeedDomain):
        SpiralSame.solve_phi_and_critical_velocity(ScenarioParams(R0=15.0, r=10.0, V_T=1.0, n=2))


def test_phi_needs_region_outside_end_game(reference):
    with pytest.raises(RadiusTooSmall):
        SpiralSame.solve_phi_at_radius(20.0, reference, 30.0)


def test_subcritical_speed_rejected(reference, critical):
    with pytest.raises(SubcriticalVelocity):
        SpiralSame.radius_evolution(reference, 0.99 * critical.V_c, V_c=critical.V_c)


def test_unknown_radius_mode(reference, critical):
    with pytest.raises(ValueError):
        SpiralSame.radius_evolution(reference, critical.V_c + 5, mode="bogus", V_c=critical.V_c)


def test_verbatim_and_band_first_radius(reference, critical):
    V_s = critical.V_c + 10
    verbatim = SpiralSame.radius_evolution(reference, V_s, VERBATIM, V_c=critical.V_c)
    band = SpiralSame.radius_evolution(reference, V_s, BAND, V_c=critical.V_c)
    R0, r, V_T = reference.R0, reference.r, reference.V_T
    first = band[0]
    assert first.R_next == pytest.approx(
        R0 - 2 * r + V_T * (first.t_main + first.t_over) + 2 * r * V_T / (V_s + V_T), rel=1e-12)
    assert verbatim[0].R_next == pytest.approx(R0 - V_T * (verbatim[0].t_main + verbatim[0].t_phi), rel=1e-12)
    # band сдвигается внутрь только до фронта: первый радиус больше, но циклов не больше
    assert first.R_next >= verbatim[0].R_next
    assert len(band) <= len(verbatim)
    assert verbatim[-1].R_next <= 2 * r
    assert band[-1].R_next <= 2 * r
    assert band[-1].t_in == 0
    assert all(a.R_next > b.R_next for a, b in zip(verbatim, verbatim[1:]))
    assert all(a.R_next > b.R_next for a, b in zip(band, band[1:]))


def test_overshoot_covers_spill_and_wavefront_meeting(reference, critical):
    V_s = critical.V_c + 10
    for it in SpiralSame.radius_evolution(reference, V_s, BAND, V_c=critical.V_c):
        assert it.t_over >= it.t_phi
        assert it.t_over >= SpiralSame.spill_clearance_time(it.R_i, reference, V_s) * (1 - 1e-12)


def test_spill_clearance_balances_swept_angle(reference, critical):
    V_s = critical.V_c + 10
    R, r, V_T = reference.R0, reference.r, reference.V_T
    s = SpiralSame.spill_clearance_time(R, reference, V_s)
    t_main = SpiralSame.main_sweep_time(R, reference, V_s)
    spread = V_T * (t_main + s)
    assert s > 0
    assert SpiralSame.overshoot_angle(R, reference, V_s, s) == pytest.approx(
        math.asin(spread / (R - 2 * r + spread)), rel=1e-9)
    with pytest.raises(RadiusTooSmall):
        SpiralSame.spill_clearance_time(2 * r, reference, V_s)


def test_beta_matches_overshoot_geometry(reference, critical):
    V_s = critical.V_c + 10
    for it in SpiralSame.radius_evolution(reference, V_s, VERBATIM, V_c=critical.V_c)[:3]:
        u = reference.V_T * it.t_phi
        expected = math.atan(-u * math.tan(it.phi_i) / (it.R_i + reference.V_T * (it.t_main - it.t_phi)))
        assert it.beta_i == pytest.approx(expected, rel=1e-12)
        assert it.beta_i < 0


def test_linear_scan_infeasible_when_slow(reference):
    with pytest.raises(LinearScanInfeasible):
        SpiralSame.endgame(reference, 1.05, 15.0)


def test_exponential_feasibility_velocity(reference):
    V = SpiralSame.exponential_feasibility_velocity(reference)
    assert CoreModel.sector_growth_factor(reference.n, V, reference.V_T) == pytest.approx(2.0, rel=1e-12)
    assert CoreModel.sector_growth_factor(reference.n, 1.01 * V, reference.V_T) < 2


def test_linear_scan_shortcut(reference):
    assert SpiralSame.linear_scan_shortcut(reference)
    assert not SpiralSame.linear_scan_shortcut(ScenarioParams(R0=10.5, r=10.0, V_T=1.0, n=2))


@pytest.mark.parametrize('mode', [VERBATIM, BAND])
def test_time_breakdown_adds_up(reference, critical, mode):
    V_s = critical.V_c + 10
    report = SpiralSame.time_breakdown(reference, V_s, mode)
    game = report.endgame
    assert report.N_n == len(report.iterations) > 0
    assert game.T_linear == pytest.approx(game.t + game.t_tilde)
    assert report.T_total == pytest.approx(
        report.T_spiral + report.T_in + game.T_e + game.T_l + game.T_f + game.T_linear)
    assert game.R_f < 2 * reference.r


def test_plan_duration_equals_total_time(reference, critical):
    V_s = critical.V_c + 10
    plan = SpiralSame.trajectory_plan(reference, V_s)
    report = SpiralSame.time_breakdown(reference, V_s)
    assert report.mode == BAND
    assert plan.total_duration == pytest.approx(report.T_total, rel=1e-9)
    kinds = plan.kinds()
    assert kinds[:2] == [SPIRAL_OUT, SPIRAL_OUT]
    assert kinds[-2:] == [LINEAR_LEG, LINEAR_LEG]
    assert kinds.count(SPIRAL_OUT) == 2 * report.N_n + 1
    assert SPIRAL_IN not in kinds
    assert plan.max_speed() <= V_s * (1 + 1e-9)


def test_guard_plan_turns_back_each_cycle(reference):
    plan = SpiralSame.trajectory_plan(reference, 20.0, enforce=False, max_cycles=2)
    assert plan.kinds().count(SPIRAL_IN) == 2
    assert plan.total_duration > 0


def test_total_time_falls_with_swarm_size(reference):
    times = []
    for n in (2, 4, 8):
        params = reference.with_n(n)
        V_s = SpiralSame.solve_phi_and_critical_velocity(params).V_c + 10
        times.append(SpiralSame.total_time(params, V_s))
    assert times[0] > times[1] > times[2]

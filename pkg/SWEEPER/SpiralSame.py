import math
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from CoreModel import CoreModel, ScenarioParams
from Exceptions import (NoConvergence, SeedDomain, RadiusTooSmall, SubcriticalVelocity,
                        LinearScanInfeasible, SlowSweeper)
from TrajectoryPlan import PlanBuilder


logger_info = logging.getLogger('info_logger')

VERBATIM = "verbatim"
BAND = "band"
RADIUS_MODES = (VERBATIM, BAND)


@dataclass(frozen=True)
class SpiralSameIteration:
    R_i: float
    t_main: float
    phi_i: float
    t_phi: float
    beta_i: float
    R_next: float
    t_in: float
    t_over: float


@dataclass(frozen=True)
class SpiralSameEndgame:
    T_e: float
    T_l: float
    R_last: float
    T_f: float
    R_f: float
    t: float
    t_tilde: float
    T_linear: float


@dataclass(frozen=True)
class SpiralSameReport:
    V_c: float
    phi_0: float
    V_s: float
    mode: str
    iterations: tuple
    N_n: int
    T_spiral: float
    T_in: float
    endgame: SpiralSameEndgame
    T_total: float


class PhiSolution(NamedTuple):
    phi: float
    t_phi: float
    beta: float


class CriticalSolution(NamedTuple):
    V_c: float
    phi_0: float


class SpiralSame:
    """
    Спиральный обход в одном направлении.

    Угол phi и время t_phi: внутренняя спираль после прохода 2π/n, пока внешний
    конец сенсора не встретит фронт от внутреннего конца сенсора соседа
    (самая опасная точка). Они задают критическую скорость.

    Режимы учета радиуса:
      verbatim - R_{i+1} = R_i − V_T·(t_main + t_phi);
      band     - цикл, который агенты проходят: внешняя спираль на 2π/n,
                 довод по той же спирали t_over = max(t_phi, время зачистки
                 перетекания через стартовый луч), сдвиг внутрь до встречи
                 внешнего конца с фронтом. Область после довода - круг
                 R_i − 2r + V_T·(t_main + t_over). План строится по этому режиму.
    """
    NAME = "spiral-same"

    INNER_ITERATIONS = 100
    ROUNDS = 50
    TOLERANCE = 1e-12
    SCAN_POINTS = 721
    MAX_CYCLES = 100000

    # ---------- геометрия одного цикла ----------

    @staticmethod
    def main_sweep_time(R_i: float, params: ScenarioParams, V_s: float) -> float:
        """ Время внешней спирали на угол 2π/n, начиная с касания окружности R_i """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        return (R_i - params.r) * (E - 1) / params.V_T

    @staticmethod
    def _overshoot_length(phi, R, params, V_s):
        """ V_T·t_phi: насколько центр сенсора уходит внутрь за внутреннюю спираль на угол phi """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        k = CoreModel.spiral_growth_rate(V_s, params.V_T)
        return (R - params.r) * E * (1 - np.exp(-np.asarray(phi) * k))

    @staticmethod
    def tip_point(phi, R, params: ScenarioParams, V_s: float):
        """ Координаты внешнего конца сенсора после доворота на phi (отсчет от вершины) """
        a = params.V_T * SpiralSame.main_sweep_time(R, params, V_s)
        u = SpiralSame._overshoot_length(phi, R, params, V_s)
        x = -u * np.sin(phi)
        y = (R + a - u) * np.cos(phi)
        return x, y

    @staticmethod
    def wavefront_radius(phi, R, params: ScenarioParams, V_s: float):
        """ Радиус фронта от самой опасной точки к концу внутренней спирали """
        a = params.V_T * SpiralSame.main_sweep_time(R, params, V_s)
        return a + SpiralSame._overshoot_length(phi, R, params, V_s)

    @staticmethod
    def wavefront_gap(phi, R, params: ScenarioParams, V_s: float):
        """ Расстояние от конца сенсора до самой опасной точки минус радиус фронта """
        x, y = SpiralSame.tip_point(phi, R, params, V_s)
        return np.hypot(x, y - R + 2 * params.r) - SpiralSame.wavefront_radius(phi, R, params, V_s)

    @staticmethod
    def confinement_residual(V_s, phi, R, params: ScenarioParams):
        """ H(V_s, phi) = V_T·(t_main + t_phi) − 2r на радиусе R """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        k = CoreModel.spiral_growth_rate(V_s, params.V_T)
        return (R - params.r) * (E * (2 - math.exp(-phi * k)) - 1) - 2 * params.r

    @staticmethod
    def confinement_residual_dv(V_s, phi, R, params: ScenarioParams):
        n, V_T = params.n, params.V_T
        w = math.sqrt(V_s ** 2 - V_T ** 2)
        E = math.exp(2 * math.pi * V_T / (n * w))
        shifted = math.exp(V_T * (2 * math.pi - n * phi) / (n * w))
        return (R - params.r) * V_T * V_s / (n * w ** 3) * (-4 * math.pi * E + (2 * math.pi - n * phi) * shifted)

    @staticmethod
    def confinement_residual_dphi(V_s, phi, R, params: ScenarioParams):
        n, V_T = params.n, params.V_T
        w = math.sqrt(V_s ** 2 - V_T ** 2)
        return V_T * (R - params.r) * math.exp(V_T * (2 * math.pi - n * phi) / (n * w)) / w

    @staticmethod
    def phi_seed(R, r):
        return math.asin(min(1.0, 2 * r / (R - 2 * r)))

    @staticmethod
    def solve_phi_at_radius(R_i: float, params: ScenarioParams, V_s: float) -> PhiSolution:
        """
        Угол доворота phi на радиусе R_i: первый корень уравнения встречи
        конца сенсора с фронтом. Скобка по сетке на (0, π/2], затем brentq,
        затем ньютоновское уточнение от найденного корня.
        """
        if not R_i > 2 * params.r:
            raise RadiusTooSmall(f"R_i={R_i} is within 2r={2 * params.r}: end-game territory")
        if not V_s > params.V_T:
            raise SlowSweeper(f"V_s={V_s} must exceed V_T={params.V_T}")

        def gap(phi):
            return float(SpiralSame.wavefront_gap(phi, R_i, params, V_s))

        grid = np.linspace(0.0, math.pi / 2, SpiralSame.SCAN_POINTS)
        values = SpiralSame.wavefront_gap(grid, R_i, params, V_s)
        crossings = np.nonzero(values <= 0)[0]
        if crossings.size == 0:
            raise NoConvergence(f"no wavefront intersection found at R_i={R_i}, V_s={V_s}")
        first = int(crossings[0])
        if values[first] == 0:
            phi = float(grid[first])
        else:
            phi = optimize.brentq(gap, grid[first - 1], grid[first], xtol=1e-15,
                                  maxiter=SpiralSame.INNER_ITERATIONS)
            polished = optimize.newton(gap, phi, tol=1e-15, maxiter=SpiralSame.INNER_ITERATIONS, disp=False)
            if grid[first - 1] < polished < grid[first] and abs(gap(polished)) < abs(gap(phi)):
                phi = float(polished)

        u = float(SpiralSame._overshoot_length(phi, R_i, params, V_s))
        t_main = SpiralSame.main_sweep_time(R_i, params, V_s)
        t_phi = u / params.V_T
        beta = math.atan(-u * math.tan(phi) / (R_i + params.V_T * (t_main - t_phi)))
        return PhiSolution(phi=phi, t_phi=t_phi, beta=beta)

    @staticmethod
    def spill_clearance_time(R_i: float, params: ScenarioParams, V_s: float) -> float:
        """
        Сколько агент должен идти по внешней спирали после прохода 2π/n, чтобы
        зачистить перетекание через стартовый луч соседа.

        Перетекание к моменту t - точки ближе V_T·t к лучу. Вне круга
        R_i − 2r + V_T·t оно не шире asin(V_T·t / (R_i − 2r + V_T·t)) по углу;
        сенсор, идущий по радиусу от этого круга до фронта, должен уйти дальше.
        """
        if not R_i > 2 * params.r:
            raise RadiusTooSmall(f"R_i={R_i} is within 2r={2 * params.r}: end-game territory")
        r, V_T = params.r, params.V_T
        t_main = SpiralSame.main_sweep_time(R_i, params, V_s)
        rho = R_i - r + V_T * t_main
        rate = CoreModel.spiral_growth_rate(V_s, V_T)

        def lag(s):
            spread = V_T * (t_main + s)
            return math.log1p(V_T * s / rho) / rate - math.asin(spread / (R_i - 2 * r + spread))

        high = max(t_main, 1e-6)
        while lag(high) < 0:
            high *= 2
            if high > 1e6 * (R_i / V_T):
                raise NoConvergence(f"cannot bracket the spill clearance time at R_i={R_i}")
        return float(optimize.brentq(lag, 0.0, high, xtol=1e-13, maxiter=SpiralSame.INNER_ITERATIONS))

    @staticmethod
    def overshoot_angle(R_i: float, params: ScenarioParams, V_s: float, t_over: float) -> float:
        """ Угол внешней спирали за время t_over после прохода 2π/n """
        rho = R_i - params.r + params.V_T * SpiralSame.main_sweep_time(R_i, params, V_s)
        return math.log1p(params.V_T * t_over / rho) / CoreModel.spiral_growth_rate(V_s, params.V_T)

    # ---------- критическая скорость ----------

    @staticmethod
    def _velocity_step(params, phi, V0):
        """ Ньютон по V_s для H(V_s, phi) = 0 при фиксированном phi; при срыве - brentq """
        R0 = params.R0

        def residual(V):
            return SpiralSame.confinement_residual(V, phi, R0, params)

        def derivative(V):
            return SpiralSame.confinement_residual_dv(V, phi, R0, params)

        try:
            V = optimize.newton(residual, V0, fprime=derivative, tol=SpiralSame.TOLERANCE * V0,
                                maxiter=SpiralSame.INNER_ITERATIONS)
            if math.isfinite(V) and V > params.V_T and abs(residual(V)) < 1e-10 * (R0 - params.r):
                return float(V)
        except (RuntimeError, ValueError, OverflowError, ZeroDivisionError, SlowSweeper):
            pass

        low = params.V_T * (1 + 1e-3)
        high = max(2 * V0, 2 * low)
        while residual(high) > 0:
            high *= 2
            if high > 1e12 * params.V_T:
                raise NoConvergence(f"cannot bracket the velocity step for phi={phi}")
        try:
            return float(optimize.brentq(residual, low, high, xtol=1e-14, rtol=1e-15,
                                         maxiter=SpiralSame.INNER_ITERATIONS))
        except (RuntimeError, ValueError) as e:
            raise NoConvergence(f"velocity step failed: {e}")

    @staticmethod
    def solve_phi_and_critical_velocity(params: ScenarioParams) -> CriticalSolution:
        """
        Чередование: phi из геометрии встречи с фронтом при текущей V_s,
        затем V_s ньютоном по H при найденном phi. До ROUNDS раундов.
        """
        CoreModel.validate_scenario(params)
        if params.R0 <= 2 * params.r:
            raise SeedDomain(f"R0={params.R0} must exceed 2r={2 * params.r}")

        V = max(CoreModel.lower_bound_velocity(params), 1.01 * params.V_T)
        phi = SpiralSame.phi_seed(params.R0, params.r)
        for round_number in range(1, SpiralSame.ROUNDS + 1):
            phi_new = SpiralSame.solve_phi_at_radius(params.R0, params, V).phi
            V_new = SpiralSame._velocity_step(params, phi_new, V)
            done = (abs(V_new - V) <= SpiralSame.TOLERANCE * V
                    and abs(phi_new - phi) <= SpiralSame.TOLERANCE * max(1.0, phi))
            V, phi = V_new, phi_new
            if done:
                break
        else:
            raise NoConvergence(f"spiral same-direction alternation did not converge in {SpiralSame.ROUNDS} rounds")

        residual = SpiralSame.confinement_residual(V, phi, params.R0, params)
        if abs(residual) >= 1e-9 * (params.R0 - params.r):
            raise NoConvergence(f"confinement residual {residual} too large at V_c={V}")
        logger_info.info(f"spiral same-direction critical velocity n={params.n}: V_c={V!r}, "
                         f"phi_0={phi!r}, rounds={round_number}")
        return CriticalSolution(V_c=V, phi_0=phi)

    # ---------- эволюция радиуса и финал ----------

    @staticmethod
    def radius_evolution(params: ScenarioParams, V_s: float, mode: str = BAND, V_c=None) -> list:
        """
        Последовательность циклов до радиуса <= 2r.

        mode=verbatim: R_{i+1} = R_i − V_T·(t_main + t_phi)
        mode=band:     R_{i+1} = R_i − 2r + V_T·(t_main + t_over + t_in),
                       t_in = 2r/(V_s + V_T); в последнем цикле сдвига нет
        """
        if mode not in RADIUS_MODES:
            raise ValueError(f"unknown radius mode {mode!r}, expected one of {RADIUS_MODES}")
        if V_c is None:
            V_c = SpiralSame.solve_phi_and_critical_velocity(params).V_c
        if not V_s > V_c:
            raise SubcriticalVelocity(f"V_s={V_s} does not exceed the spiral same-direction critical velocity {V_c}")

        r, V_T = params.r, params.V_T
        E = CoreModel.sector_growth_factor(params.n, V_s, V_T)
        iterations = []
        R = params.R0
        while R > 2 * r:
            if len(iterations) >= SpiralSame.MAX_CYCLES:
                raise NoConvergence(f"radius evolution exceeded {SpiralSame.MAX_CYCLES} cycles")
            t_main = SpiralSame.main_sweep_time(R, params, V_s)
            solution = SpiralSame.solve_phi_at_radius(R, params, V_s)
            if mode == VERBATIM:
                t_over = solution.t_phi
                R_next = R - V_T * (t_main + t_over)
                # радиальный зазор между концом цикла и касанием следующего
                post = (R - r) * E - V_T * t_over
                t_in = abs(post - (R_next - r)) / V_s if R_next > 2 * r else 0.0
            else:
                t_over = max(solution.t_phi, SpiralSame.spill_clearance_time(R, params, V_s))
                R_end = R - 2 * r + V_T * (t_main + t_over)
                t_in = 2 * r / (V_s + V_T)
                R_next = R_end + V_T * t_in
                if not R_next > 2 * r:
                    t_in, R_next = 0.0, R_end
            if not R_next < R:
                raise SubcriticalVelocity(f"region does not shrink at R={R} in {mode} mode")
            iterations.append(SpiralSameIteration(R_i=R, t_main=t_main, phi_i=solution.phi,
                                                  t_phi=solution.t_phi, beta_i=solution.beta,
                                                  R_next=R_next, t_in=t_in, t_over=t_over))
            R = R_next
        return iterations

    @staticmethod
    def exponential_feasibility_velocity(params: ScenarioParams) -> float:
        """ Скорость, выше которой E < 2 """
        return params.V_T * math.sqrt(4 * math.pi ** 2 / (params.n * math.log(2)) ** 2 + 1)

    @staticmethod
    def linear_scan_shortcut(params: ScenarioParams) -> bool:
        """ Если True, любая V_s >= V_LB автоматически дает R_last < 2r """
        return math.sqrt(4 / (params.n * math.log(2)) ** 2 + 1 / math.pi ** 2) < params.R0 / params.r

    @staticmethod
    def endgame(params: ScenarioParams, V_s: float, R_N: float) -> SpiralSameEndgame:
        r, V_T = params.r, params.V_T
        E = CoreModel.sector_growth_factor(params.n, V_s, V_T)
        if not E < 2:
            raise LinearScanInfeasible(f"growth factor E={E} must stay below 2 for the linear scan")
        T_e = R_N / V_s
        T_l = r * (E - 1) / V_T
        R_last = T_l * V_T
        T_f = (2 * r - R_last) / V_s
        R_f = T_f * V_T + R_last
        if not R_f < 2 * r or V_s < (2 * r * V_T + V_T * R_f) / (2 * r - R_f):
            raise LinearScanInfeasible(f"V_s={V_s} is below the linear-scan bound for R_f={R_f}")
        t = R_f / (V_s - V_T)
        t_tilde = 2 * V_s * R_f / (V_s - V_T) ** 2
        return SpiralSameEndgame(T_e=T_e, T_l=T_l, R_last=R_last, T_f=T_f, R_f=R_f,
                                 t=t, t_tilde=t_tilde, T_linear=t + t_tilde)

    @staticmethod
    def time_breakdown(params: ScenarioParams, V_s: float, mode: str = BAND) -> SpiralSameReport:
        critical = SpiralSame.solve_phi_and_critical_velocity(params)
        iterations = SpiralSame.radius_evolution(params, V_s, mode, V_c=critical.V_c)
        R_N = iterations[-1].R_next if iterations else params.R0
        game = SpiralSame.endgame(params, V_s, R_N)
        T_spiral = sum(it.t_main + it.t_over for it in iterations)
        T_in = sum(it.t_in for it in iterations)
        T_total = T_spiral + T_in + game.T_e + game.T_l + game.T_f + game.T_linear
        return SpiralSameReport(V_c=critical.V_c, phi_0=critical.phi_0, V_s=V_s, mode=mode,
                                iterations=tuple(iterations), N_n=len(iterations), T_spiral=T_spiral,
                                T_in=T_in, endgame=game, T_total=T_total)

    @staticmethod
    def total_time(params: ScenarioParams, V_s: float, mode: str = BAND) -> float:
        return SpiralSame.time_breakdown(params, V_s, mode).T_total

    @staticmethod
    def trajectory_plan(params: ScenarioParams, V_s: float, enforce=True, max_cycles=3):
        """
        План по режиму band: спираль на 2π/n, довод t_over, сдвиг внутрь;
        затем финал: концы сенсоров в центр, последняя спираль, снова к центру,
        линейный проход вправо и влево.

        При enforce=False скорость не проверяется: max_cycles циклов внешней
        и внутренней спирали на угол phi_seed с возвратом на исходный радиус.
        """
        n, r, V_T = params.n, params.r, params.V_T
        sector = 2 * math.pi / n
        thetas, directions = PlanBuilder.same_direction_layout(n)
        builder = PlanBuilder(SpiralSame.NAME, n, r, V_s, V_T, thetas, directions, rho=params.R0 - r)

        if not enforce:
            CoreModel.validate_scenario(params)
            CoreModel.spiral_tilt_angle(V_s, V_T)
            phi = SpiralSame.phi_seed(params.R0, r) if params.R0 > 2 * r else 0.0
            for _ in range(max_cycles):
                builder.spiral(sector)
                if phi > 0:
                    builder.spiral(phi, outward=False)
                builder.advance(params.R0 - r, abs(builder.rho - (params.R0 - r)) / V_s)
            return builder.plan

        report = SpiralSame.time_breakdown(params, V_s, BAND)
        game = report.endgame
        for it in report.iterations:
            builder.spiral(sector)
            builder.spiral(SpiralSame.overshoot_angle(it.R_i, params, V_s, it.t_over))
            if it.t_in > 0:
                builder.advance(it.R_next - r, it.t_in)

        builder.advance(r, game.T_e)
        builder.spiral(sector)
        builder.advance(r, game.T_f)
        theta0 = builder.theta[0]
        heading = np.array([-math.sin(theta0), math.cos(theta0)])
        builder.linear(heading, game.t * V_s, game.t)
        builder.linear(-heading, game.t_tilde * V_s, game.t_tilde)
        logger_info.info(f"spiral same-direction plan n={n} V_s={V_s!r}: {report.N_n} cycles, "
                         f"{builder.plan.total_duration!r}")
        return builder.plan

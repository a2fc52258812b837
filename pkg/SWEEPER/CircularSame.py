import math
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from CoreModel import CoreModel, ScenarioParams
from Exceptions import SubcriticalVelocity, EndgameInfeasible, FormulaDiscrepancy
from TrajectoryPlan import PlanBuilder


logger_error = logging.getLogger('error_logger')


class CircularSameCritical(NamedTuple):
    exact: float
    linearized: float


class CircularSameEndgame(NamedTuple):
    R_last: float
    T_last: float
    T_linear: float
    t: float
    t_tilde: float


@dataclass(frozen=True)
class CircularSameReport:
    V_c_exact: float
    V_c: float
    V_s: float
    N_n: int
    T_in: float
    T_circular: float
    T_last: float
    R_last: float
    T_linear: float
    T_total: float
    dV_min: float
    endgame_feasible: bool


class CircularSame:
    """
    Круговой обход в одном направлении.

    Все агенты идут против часовой стрелки; критическая скорость больше
    клещевой на V_T (линеаризация арксинуса). Финал - линейный проход
    вправо и влево после последнего кругового прохода на радиусе r.
    """
    NAME = "circular-same"
    TOLERANCE = 1e-9

    @staticmethod
    def critical_velocity(params: ScenarioParams) -> CircularSameCritical:
        CoreModel.validate_scenario(params)
        n, r, R0, V_T = params.n, params.r, params.R0, params.V_T
        exact = (2 * math.pi / n + math.asin(r / R0)) * R0 * V_T / r
        linearized = 2 * math.pi * R0 * V_T / (r * n) + V_T
        return CircularSameCritical(exact=exact, linearized=linearized)

    @staticmethod
    def coefficients(params: ScenarioParams, V_s: float):
        c1 = -params.r * (V_s - params.V_T) / (V_s + params.V_T)
        c2 = 1 + 2 * math.pi * params.V_T / (params.n * (V_s + params.V_T))
        return c1, c2

    @staticmethod
    def fixed_point(params: ScenarioParams, V_s: float) -> float:
        c1, c2 = CircularSame.coefficients(params, V_s)
        return c1 / (1 - c2)

    @staticmethod
    def _check_supercritical(params, V_s):
        V_c = CircularSame.critical_velocity(params).linearized
        if not V_s > V_c:
            raise SubcriticalVelocity(f"V_s={V_s} does not exceed the circular same-direction critical velocity {V_c}")
        return V_c

    @staticmethod
    def radius_sequence(params: ScenarioParams, V_s: float) -> list:
        CircularSame._check_supercritical(params, V_s)
        c1, c2 = CircularSame.coefficients(params, V_s)
        radii = [params.R0]
        while radii[-1] > params.r:
            radii.append(c2 * radii[-1] + c1)
        return radii

    @staticmethod
    def radius_closed_form(params: ScenarioParams, V_s: float, k):
        """ R_k = c1/(1−c2) + c2^k·(R0 − c1/(1−c2)); k может быть массивом """
        _, c2 = CircularSame.coefficients(params, V_s)
        F = CircularSame.fixed_point(params, V_s)
        return F + np.power(c2, k) * (params.R0 - F)

    @staticmethod
    def iteration_count(params: ScenarioParams, V_s: float) -> int:
        """ Число итераций: по рекурсии, сверка с логарифмом; при расхождении вне допуска побеждает рекурсия """
        radii = CircularSame.radius_sequence(params, V_s)
        N = len(radii) - 1
        _, c2 = CircularSame.coefficients(params, V_s)
        F = CircularSame.fixed_point(params, V_s)
        closed = CoreModel.ceil_with_tie(math.log((F - params.r) / (F - params.R0)) / math.log(c2))
        if closed != N:
            logger_error.error(f"circular same iteration count: recursion {N} vs closed form {closed}")
        return N

    @staticmethod
    def endgame(params: ScenarioParams, V_s: float, check=True) -> CircularSameEndgame:
        CircularSame._check_supercritical(params, V_s)
        n, r, V_T = params.n, params.r, params.V_T
        T_last = 2 * math.pi * r / (n * V_s)
        R_last = T_last * V_T
        t = R_last / (V_s - V_T)
        t_tilde = 2 * V_s * R_last / (V_s - V_T) ** 2
        T_linear = (6 * math.pi * r * V_T * V_s - 2 * math.pi * r * V_T ** 2) / (n * V_s * (V_s - V_T) ** 2)
        if check and not (2 * r - R_last) / V_T > T_linear:
            raise EndgameInfeasible(
                f"linear end-game margin {(2 * r - R_last) / V_T} does not exceed T_linear={T_linear}")
        return CircularSameEndgame(R_last=R_last, T_last=T_last, T_linear=T_linear, t=t, t_tilde=t_tilde)

    @staticmethod
    def endgame_margin_holds(params: ScenarioParams, V_s: float) -> bool:
        """ 2r·(V_s − V_T)² > R_last·V_s·(V_s + V_T) """
        R_last = 2 * math.pi * params.r * params.V_T / (params.n * V_s)
        return 2 * params.r * (V_s - params.V_T) ** 2 > R_last * V_s * (V_s + params.V_T)

    @staticmethod
    def min_delta_v(params: ScenarioParams) -> float:
        """ Больший корень квадратного неравенства по dV; отрицательное значение - годится любой dV """
        CoreModel.validate_scenario(params)
        alpha = params.R0 / params.r
        n, V_T = params.n, params.V_T
        return (-4 * math.pi * V_T * alpha + math.pi * V_T + V_T * math.sqrt(math.pi ** 2 + 8 * math.pi * n)) / (2 * n)

    @staticmethod
    def delta_v_quadratic(params: ScenarioParams):
        """ Коэффициенты (a, b, c) квадратного выражения a·dV² + b·dV + c > 0 """
        alpha = params.R0 / params.r
        n, V_T = params.n, params.V_T
        b = (4 * math.pi * V_T * alpha - math.pi * V_T) / n
        c = (4 * math.pi ** 2 * V_T ** 2 * alpha ** 2 - 2 * math.pi ** 2 * alpha * V_T ** 2
             - 2 * math.pi * n * V_T ** 2) / n ** 2
        return 1.0, b, c

    @staticmethod
    def time_breakdown(params: ScenarioParams, V_s: float) -> CircularSameReport:
        critical = CircularSame.critical_velocity(params)
        CircularSame._check_supercritical(params, V_s)
        n, r, R0 = params.n, params.r, params.R0
        N = CircularSame.iteration_count(params, V_s)
        _, c2 = CircularSame.coefficients(params, V_s)
        F = CircularSame.fixed_point(params, V_s)

        R_prev = CircularSame.radius_closed_form(params, V_s, N - 1)
        R_N = CircularSame.radius_closed_form(params, V_s, N)
        T_in = float((R0 - R_prev) / V_s + R_N / V_s)

        T_last = 2 * math.pi * r / (n * V_s)
        radii_sum = N * F + (R0 - F) * (c2 ** N - 1) / (c2 - 1)
        T_circular = 2 * math.pi * radii_sum / (n * V_s) + T_last

        game = CircularSame.endgame(params, V_s, check=False)
        return CircularSameReport(V_c_exact=critical.exact, V_c=critical.linearized, V_s=V_s, N_n=N,
                                  T_in=T_in, T_circular=T_circular, T_last=T_last, R_last=game.R_last,
                                  T_linear=game.T_linear, T_total=T_circular + T_in + game.T_linear,
                                  dV_min=CircularSame.min_delta_v(params),
                                  endgame_feasible=CircularSame.endgame_margin_holds(params, V_s))

    @staticmethod
    def printed_total_time(params: ScenarioParams, V_s: float, N: int) -> float:
        """ Итоговая формула полного времени в замкнутом виде (для сверки с суммой компонент) """
        n, r, R0, V_T = params.n, params.r, params.R0, params.V_T
        c2 = 1 + 2 * math.pi * V_T / (n * (V_s + V_T))
        head = -R0 / V_T + r * (V_s - V_T) * (n * (V_s + V_T) + 2 * math.pi * V_T * N) / (2 * math.pi * V_T ** 2 * V_s)
        tail = c2 ** (N - 1) * (2 * math.pi * R0 * V_T - r * n * (V_s - V_T)) / V_s * (
            1 / (n * (V_s + V_T)) + V_s / (2 * math.pi * V_T ** 2) + 1 / (2 * math.pi * V_T) + 1 / (n * V_T))
        T_linear = (6 * math.pi * r * V_T * V_s - 2 * math.pi * r * V_T ** 2) / (n * V_s * (V_s - V_T) ** 2)
        return head + tail + 2 * math.pi * r / (n * V_s) + T_linear

    @staticmethod
    def formula_discrepancy(params: ScenarioParams, V_s: float) -> Optional[FormulaDiscrepancy]:
        report = CircularSame.time_breakdown(params, V_s)
        printed = CircularSame.printed_total_time(params, V_s, report.N_n)
        diagnostic = FormulaDiscrepancy(name="circular same-direction total time", printed=printed,
                                        component_sum=report.T_total)
        if diagnostic.relative_gap > CircularSame.TOLERANCE:
            logger_error.error(str(diagnostic))
            return diagnostic
        return None

    @staticmethod
    def total_time(params: ScenarioParams, V_s: float) -> float:
        """ Полное время: сумма компонент авторитетна, замкнутая формула только сверяется """
        CircularSame.endgame(params, V_s)
        report = CircularSame.time_breakdown(params, V_s)
        CircularSame.formula_discrepancy(params, V_s)
        return report.T_total

    @staticmethod
    def trajectory_plan(params: ScenarioParams, V_s: float, enforce=True, max_cycles=3):
        n, r = params.n, params.r
        sector = 2 * math.pi / n
        thetas, directions = PlanBuilder.same_direction_layout(n)

        if not enforce:
            CoreModel.validate_scenario(params)
            builder = PlanBuilder(CircularSame.NAME, n, r, V_s, params.V_T, thetas, directions, rho=params.R0)
            for _ in range(max_cycles):
                builder.arc(sector)
            return builder.plan

        radii = CircularSame.radius_sequence(params, V_s)
        game = CircularSame.endgame(params, V_s)
        N = len(radii) - 1
        # старт смещен так, чтобы после последнего прохода агент 0 смотрел вверх
        offset = math.pi / 2 - (N + 1) * sector
        builder = PlanBuilder(CircularSame.NAME, n, r, V_s, params.V_T, thetas + offset, directions, rho=params.R0)
        for i in range(N):
            builder.arc(sector)
            if i < N - 1:
                builder.advance(radii[i + 1], (radii[i] - radii[i + 1]) / V_s)
        builder.advance(r, radii[N] / V_s)
        builder.arc(sector)

        # линейный финал: вправо на t·V_s, затем влево на t̃·V_s
        heading = np.array([1.0, 0.0])
        builder.linear(heading, game.t * V_s, game.t)
        builder.linear(-heading, game.t_tilde * V_s, game.t_tilde)
        return builder.plan

import math
from dataclasses import dataclass

from CoreModel import CoreModel, ScenarioParams
from Exceptions import SubcriticalVelocity
from TrajectoryPlan import PlanBuilder


@dataclass(frozen=True)
class CircularPincerReport:
    V_c: float
    V_s: float
    N_n: int
    T_in: float
    T_circular: float
    T_total: float


class CircularPincer:
    """
    Круговой клещевой обход: пары агентов расходятся спина к спине,
    встречаются через угол 2π/n, меняют направление и сдвигаются внутрь.
    """
    NAME = "circular-pincer"

    @staticmethod
    def critical_velocity(params: ScenarioParams) -> float:
        CoreModel.validate_scenario(params)
        return 2 * math.pi * params.R0 * params.V_T / (params.n * params.r)

    @staticmethod
    def coefficients(params: ScenarioParams, V_s: float):
        """ Коэффициенты рекурсии R_{i+1} = c2·R_i + c1 """
        c1 = -params.r * V_s / (V_s + params.V_T)
        c2 = 1 + 2 * math.pi * params.V_T / (params.n * (V_s + params.V_T))
        return c1, c2

    @staticmethod
    def fixed_point(params: ScenarioParams, V_s: float) -> float:
        return params.n * params.r * V_s / (2 * math.pi * params.V_T)

    @staticmethod
    def _check_supercritical(params, V_s):
        V_c = CircularPincer.critical_velocity(params)
        if not V_s > V_c:
            raise SubcriticalVelocity(f"V_s={V_s} does not exceed the circular pincer critical velocity {V_c}")
        return V_c

    @staticmethod
    def radius_sequence(params: ScenarioParams, V_s: float) -> list:
        """ R_0, R_1, ... до первого R_i <= r, по рекурсии """
        CircularPincer._check_supercritical(params, V_s)
        c1, c2 = CircularPincer.coefficients(params, V_s)
        radii = [params.R0]
        while radii[-1] > params.r:
            radii.append(c2 * radii[-1] + c1)
        return radii

    @staticmethod
    def radius_closed_form(params: ScenarioParams, V_s: float, k: int) -> float:
        F = CircularPincer.fixed_point(params, V_s)
        _, c2 = CircularPincer.coefficients(params, V_s)
        return F + c2 ** k * (params.R0 - F)

    @staticmethod
    def iteration_count(params: ScenarioParams, V_s: float) -> int:
        """
        Число итераций до R <= r по логарифмической формуле (с допуском на границе целого).
        """
        CircularPincer._check_supercritical(params, V_s)
        n, r, R0, V_T = params.n, params.r, params.R0, params.V_T
        ratio = (2 * math.pi * r * V_T - n * r * V_s) / (2 * math.pi * R0 * V_T - n * r * V_s)
        _, c2 = CircularPincer.coefficients(params, V_s)
        return max(1, CoreModel.ceil_with_tie(math.log(ratio) / math.log(c2)))

    @staticmethod
    def time_breakdown(params: ScenarioParams, V_s: float) -> CircularPincerReport:
        V_c = CircularPincer._check_supercritical(params, V_s)
        n, r, R0 = params.n, params.r, params.R0
        N = CircularPincer.iteration_count(params, V_s)
        _, c2 = CircularPincer.coefficients(params, V_s)
        F = CircularPincer.fixed_point(params, V_s)

        R_prev = CircularPincer.radius_closed_form(params, V_s, N - 1)
        R_N = CircularPincer.radius_closed_form(params, V_s, N)
        T_in = (R0 - R_prev + R_N) / V_s

        radii_sum = N * F + (R0 - F) * (c2 ** N - 1) / (c2 - 1)
        T_circular = 2 * math.pi * radii_sum / (n * V_s) + 2 * math.pi * r / (n * V_s)

        return CircularPincerReport(V_c=V_c, V_s=V_s, N_n=N, T_in=T_in,
                                    T_circular=T_circular, T_total=T_in + T_circular)

    @staticmethod
    def trajectory_plan(params: ScenarioParams, V_s: float, enforce=True, max_cycles=3):
        """
        План движения. При enforce=False скорость не проверяется: строится
        max_cycles циклов без сжатия области (для проверки ухода уклоняющихся).
        """
        n, r = params.n, params.r
        sector = 2 * math.pi / n
        thetas, directions = PlanBuilder.pincer_layout(n)
        builder = PlanBuilder(CircularPincer.NAME, n, r, V_s, params.V_T, thetas, directions, rho=params.R0)

        if not enforce:
            CoreModel.validate_scenario(params)
            for _ in range(max_cycles):
                builder.arc(sector)
                builder.switch_direction()
            return builder.plan

        radii = CircularPincer.radius_sequence(params, V_s)
        N = len(radii) - 1
        for i in range(N):
            builder.arc(sector)
            builder.switch_direction()
            if i < N - 1:
                builder.advance(radii[i + 1], (radii[i] - radii[i + 1]) / V_s)
            else:
                # центр сенсора на r: ближний конец сенсора в центре области
                builder.advance(r, radii[N] / V_s)
        builder.arc(sector)
        return builder.plan

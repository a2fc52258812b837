import math
import logging
from dataclasses import dataclass

from scipy import optimize

from CoreModel import CoreModel, ScenarioParams
from Exceptions import NoConvergence, SubcriticalVelocity
from TrajectoryPlan import PlanBuilder


logger_info = logging.getLogger('info_logger')


@dataclass(frozen=True)
class SpiralPincerReport:
    V_c: float
    V_s: float
    N_n: int
    eta: int
    N_total: int
    T_in: float
    T_spiral: float
    T_total: float
    R_N: float


class SpiralPincer:
    """
    Спиральный клещевой обход.

    Каждый агент раскручивается наружу на угол 2π/n, держа внешний конец
    сенсора на фронте области, затем пара меняет направление, а рой
    сдвигается внутрь.

    time_breakdown - аналитический учет времени, отношение радиусов
    q = (V_T + V_s·E)/(V_s + V_T). Он считает, что сдвиг начинается с конца
    сенсора на R_i, что на скорости V_s недостижимо. reachable_breakdown
    считает время плана trajectory_plan, отношение радиусов в нем E.
    """
    NAME = "spiral-pincer"

    # Сходимость корневого поиска
    XTOL = 1e-10
    MAX_BRACKET_DOUBLINGS = 60

    @staticmethod
    def confinement_residual(params: ScenarioParams, V_s: float) -> float:
        """ V_T·T_c(V_s) − 2r·V_s/(V_s + V_T); отрицательно на сверхкритической скорости """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        return (params.R0 - params.r) * (E - 1) - 2 * params.r * V_s / (V_s + params.V_T)

    @staticmethod
    def critical_velocity(params: ScenarioParams) -> float:
        """
        Критическая скорость: бисекция по скобке [max(V_LB, V_T), 2·V_LB]
        до XTOL и одна итерация Ньютона для уточнения.
        """
        V_LB = CoreModel.lower_bound_velocity(params)

        def residual(V):
            return SpiralPincer.confinement_residual(params, V)

        low = max(V_LB, params.V_T * (1 + 1e-4))
        high = max(2 * V_LB, low * 2)
        for _ in range(SpiralPincer.MAX_BRACKET_DOUBLINGS):
            if residual(high) < 0:
                break
            high *= 2
        else:
            raise NoConvergence(f"could not bracket the spiral pincer critical velocity for {params}")
        if residual(low) <= 0:
            raise NoConvergence(f"lower bracket end {low} already satisfies confinement for {params}")

        try:
            root = optimize.bisect(residual, low, high, xtol=SpiralPincer.XTOL, maxiter=500)
        except (RuntimeError, ValueError) as e:
            raise NoConvergence(f"bisection failed: {e}")

        polished = optimize.newton(residual, root, maxiter=1, disp=False)
        if abs(residual(polished)) < abs(residual(root)) and low < polished < high:
            root = float(polished)

        logger_info.info(f"spiral pincer critical velocity n={params.n}: {root!r}")
        return float(root)

    @staticmethod
    def ratio_and_fixed_point(params: ScenarioParams, V_s: float):
        """ (q, R*, E): R_{i+1} = R* + q·(R_i − R*) """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        q = (params.V_T + V_s * E) / (V_s + params.V_T)
        R_star = params.r * (1 + E) / (E - 1)
        return q, R_star, E

    @staticmethod
    def _check_supercritical(params, V_s):
        if not V_s > params.V_T or SpiralPincer.confinement_residual(params, V_s) >= 0:
            raise SubcriticalVelocity(f"V_s={V_s} does not satisfy spiral pincer confinement for {params}")

    @staticmethod
    def next_radius(params: ScenarioParams, V_s: float, R_i: float) -> float:
        """
        Радиус следующего цикла: после спирали центр сенсора на (R_i − r)·E,
        область - круг радиуса (R_i − r)·E − r; сближение со скоростью V_s + V_T.
        """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        return (params.V_T * R_i + V_s * ((R_i - params.r) * E - params.r)) / (V_s + params.V_T)

    @staticmethod
    def radius_sequence(params: ScenarioParams, V_s: float) -> list:
        """ R_0, R_1, ... до первого R_i <= 2r """
        SpiralPincer._check_supercritical(params, V_s)
        radii = [params.R0]
        while radii[-1] > 2 * params.r:
            radii.append(SpiralPincer.next_radius(params, V_s, radii[-1]))
        return radii

    @staticmethod
    def radius_closed_form(params: ScenarioParams, V_s: float, k: int) -> float:
        q, R_star, _ = SpiralPincer.ratio_and_fixed_point(params, V_s)
        return R_star - q ** k * (R_star - params.R0)

    @staticmethod
    def main_sweep_time(params: ScenarioParams, V_s: float, R_i: float) -> float:
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        return (R_i - params.r) * (E - 1) / params.V_T

    @staticmethod
    def _eta(params, V_s, R_N):
        # eta = 0, если после последнего сдвига и финального прохода разлет укладывается в 2r
        spread = R_N * (1 + params.V_T / V_s) + 2 * math.pi * params.r * params.V_T / (params.n * V_s)
        return 0 if spread <= 2 * params.r else 1

    @staticmethod
    def iteration_count(params: ScenarioParams, V_s: float):
        """
        Returns:
            tuple: (N_n, eta)
        """
        SpiralPincer._check_supercritical(params, V_s)
        q, R_star, _ = SpiralPincer.ratio_and_fixed_point(params, V_s)
        if params.R0 <= 2 * params.r:
            N = 0
        else:
            value = math.log((R_star - 2 * params.r) / (R_star - params.R0)) / math.log(q)
            N = max(1, CoreModel.ceil_with_tie(value))
        R_N = SpiralPincer.radius_closed_form(params, V_s, N)
        return N, SpiralPincer._eta(params, V_s, R_N)

    @staticmethod
    def time_breakdown(params: ScenarioParams, V_s: float) -> SpiralPincerReport:
        V_c = SpiralPincer.critical_velocity(params)
        N, eta = SpiralPincer.iteration_count(params, V_s)
        q, R_star, E = SpiralPincer.ratio_and_fixed_point(params, V_s)
        n, r, R0, V_T = params.n, params.r, params.R0, params.V_T

        R_N = SpiralPincer.radius_closed_form(params, V_s, N)
        if N > 0:
            # сумма сдвигов между циклами: (R0 − R_{N−1}) / V_s
            T_in_cycles = (R_star - R0) * (q ** (N - 1) - 1) / V_s
            radii_sum = N * R_star - (R_star - R0) * (q ** N - 1) / (q - 1)
            T_spiral_cycles = (radii_sum - N * r) * (E - 1) / V_T
        else:
            T_in_cycles = 0.0
            T_spiral_cycles = 0.0

        T_in = T_in_cycles + R_N / V_s + eta * r * (E - 1) / V_s
        T_spiral = T_spiral_cycles + 2 * math.pi * r / (n * V_s) + eta * r * (E - 1) / V_T
        return SpiralPincerReport(V_c=V_c, V_s=V_s, N_n=N, eta=eta, N_total=N + eta + 1,
                                  T_in=T_in, T_spiral=T_spiral, T_total=T_in + T_spiral, R_N=R_N)

    # ---------- достижимый план ----------

    @staticmethod
    def reachable_next_radius(params: ScenarioParams, V_s: float, R_i: float) -> float:
        """
        Радиус следующего цикла, достижимый на скорости V_s.

        После спирали область - круг X = (R_i − r)·E − r, внешний конец сенсора на X + 2r.
        Сдвиг внутрь со скоростью V_s встречает фронт за 2r/(V_s + V_T).
        """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        r = params.r
        return (R_i - r) * E - r + 2 * r * params.V_T / (V_s + params.V_T)

    @staticmethod
    def reachable_fixed_point(params: ScenarioParams, V_s: float):
        """ (P, E): R_{i+1} = P + E·(R_i − P) """
        E = CoreModel.sector_growth_factor(params.n, V_s, params.V_T)
        r = params.r
        P = (r * (E + 1) - 2 * r * params.V_T / (V_s + params.V_T)) / (E - 1)
        return P, E

    @staticmethod
    def reachable_radii(params: ScenarioParams, V_s: float) -> list:
        """ R_0, R_1, ... до первого R_i <= 2r (только R_0, если R0 <= 2r) """
        SpiralPincer._check_supercritical(params, V_s)
        radii = [params.R0]
        while radii[-1] > 2 * params.r:
            radii.append(SpiralPincer.reachable_next_radius(params, V_s, radii[-1]))
        return radii

    @staticmethod
    def _final_eta(params, V_s, B_f):
        # после выхода концов сенсоров в центр область - круг B_f; финальная дуга длится 2πr/(n·V_s)
        spread = B_f + 2 * math.pi * params.r * params.V_T / (params.n * V_s)
        return 0 if spread <= 2 * params.r else 1

    @staticmethod
    def reachable_breakdown(params: ScenarioParams, V_s: float) -> SpiralPincerReport:
        """
        Время плана, который агенты проходят со скоростью не выше V_s.

        Returns:
            SpiralPincerReport: T_total равно длительности trajectory_plan.
        """
        V_c = SpiralPincer.critical_velocity(params)
        radii = SpiralPincer.reachable_radii(params, V_s)
        P, E = SpiralPincer.reachable_fixed_point(params, V_s)
        n, r, R0, V_T = params.n, params.r, params.R0, params.V_T
        N = len(radii) - 1

        if N > 0:
            radii_sum = N * P - (P - R0) * (E ** N - 1) / (E - 1)
            R_last = P - E ** (N - 1) * (P - R0)
            X = (R_last - r) * E - r
            T_spiral_cycles = (radii_sum - N * r) * (E - 1) / V_T
            T_in_cycles = (N - 1) * 2 * r / (V_s + V_T) + X / V_s
            B_f = X * (1 + V_T / V_s)
        else:
            T_spiral_cycles = 0.0
            T_in_cycles = 0.0
            B_f = R0
        eta = SpiralPincer._final_eta(params, V_s, B_f)

        T_in = T_in_cycles + eta * r * (E - 1) / V_s
        T_spiral = T_spiral_cycles + eta * r * (E - 1) / V_T + 2 * math.pi * r / (n * V_s)
        return SpiralPincerReport(V_c=V_c, V_s=V_s, N_n=N, eta=eta, N_total=N + eta + 1,
                                  T_in=T_in, T_spiral=T_spiral, T_total=T_in + T_spiral, R_N=radii[-1])

    @staticmethod
    def trajectory_plan(params: ScenarioParams, V_s: float, enforce=True, max_cycles=3):
        """
        План клещевого обхода. Сенсоры на спиралях направлены по радиусу,
        внешний конец идет по фронту области; ни одна фаза не быстрее V_s.
        """
        n, r, V_T = params.n, params.r, params.V_T
        sector = 2 * math.pi / n
        thetas, directions = PlanBuilder.pincer_layout(n)
        start = params.R0 - r if params.R0 > 2 * r else r
        builder = PlanBuilder(SpiralPincer.NAME, n, r, V_s, V_T, thetas, directions, rho=start)

        if not enforce:
            CoreModel.validate_scenario(params)
            for _ in range(max_cycles):
                builder.spiral(sector)
                builder.switch_direction()
                builder.advance(start, abs(builder.rho - start) / V_s)
            return builder.plan

        radii = SpiralPincer.reachable_radii(params, V_s)
        E = CoreModel.sector_growth_factor(n, V_s, V_T)
        N = len(radii) - 1
        B_f = params.R0
        for i in range(N):
            builder.spiral(sector)
            builder.switch_direction()
            X = builder.rho - r
            if i < N - 1:
                builder.advance(radii[i + 1] - r, 2 * r / (V_s + V_T))
            else:
                builder.advance(r, X / V_s)
                B_f = X * (1 + V_T / V_s)

        if SpiralPincer._final_eta(params, V_s, B_f):
            builder.spiral(sector)
            builder.switch_direction()
            builder.advance(r, r * (E - 1) / V_s)
        builder.arc(sector, radius=r)
        logger_info.info(f"spiral pincer plan n={n} V_s={V_s!r}: {N} cycles, {builder.plan.total_duration!r}")
        return builder.plan

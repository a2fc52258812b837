import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from Exceptions import OddSwarm, NonPositiveParameter, RegionSmallerThanSensor, SlowSweeper


@dataclass(frozen=True)
class ScenarioParams:
    """
    Параметры сценария поиска.

    R0: начальный радиус области уклоняющихся
    r: половина длины линейного сенсора (сенсор длиной 2r)
    V_T: максимальная скорость уклоняющегося
    n: размер роя (четный)
    dV: запас скорости над критической
    """
    R0: float
    r: float
    V_T: float
    n: int
    dV: float = 0.0

    def with_n(self, n):
        return replace(self, n=n)

    def with_dv(self, dV):
        return replace(self, dV=dV)


@dataclass(frozen=True)
class SpiralGeometry:
    """ Геометрия спирального прохода: наклон phi к нормали и скорости по радиусу/углу. """
    phi: float
    V_s: float
    V_T: float

    @property
    def radial_rate(self):
        return self.V_T

    @property
    def tangential_speed(self):
        return math.sqrt(self.V_s ** 2 - self.V_T ** 2)

    def angular_rate(self, radius):
        # dθ/dt на текущем радиусе центра сенсора
        return self.tangential_speed / radius


class SpiralArc(NamedTuple):
    radius: float
    elapsed: float


class CoreModel:
    """
    Общие для всех стратегий операции: проверка сценария,
    нижняя граница скорости и геометрия спирали.
    """

    @staticmethod
    def validate_scenario(params: ScenarioParams) -> ScenarioParams:
        """
        Проверяет инварианты сценария и возвращает его без изменений.

        Args:
            params (ScenarioParams): Проверяемый сценарий.

        Returns:
            ScenarioParams: Тот же объект, если все инварианты выполнены.
        """
        for name in ("R0", "r", "V_T"):
            value = getattr(params, name)
            if not value > 0 or not math.isfinite(value):
                raise NonPositiveParameter(f"{name} must be a positive finite number, got {value}")
        if params.n < 2:
            raise NonPositiveParameter(f"n must be at least 2, got {params.n}")
        if params.n % 2:
            raise OddSwarm(f"swarm size must be even, got n={params.n}")
        if params.dV < 0:
            raise NonPositiveParameter(f"dV must be non-negative, got {params.dV}")
        if params.R0 <= params.r:
            raise RegionSmallerThanSensor(f"R0={params.R0} must exceed r={params.r}")
        return params

    @staticmethod
    def lower_bound_velocity(params: ScenarioParams) -> float:
        """ V_LB = π·R0·V_T / (n·r): ни одна стратегия не удерживает область на меньшей скорости """
        CoreModel.validate_scenario(params)
        return math.pi * params.R0 * params.V_T / (params.n * params.r)

    @staticmethod
    def spiral_tilt_angle(V_s: float, V_T: float) -> float:
        if not V_s > V_T:
            raise SlowSweeper(f"spiral geometry needs V_s > V_T, got V_s={V_s}, V_T={V_T}")
        return math.asin(V_T / V_s)

    @staticmethod
    def spiral_geometry(V_s: float, V_T: float) -> SpiralGeometry:
        return SpiralGeometry(phi=CoreModel.spiral_tilt_angle(V_s, V_T), V_s=V_s, V_T=V_T)

    @staticmethod
    def spiral_growth_rate(V_s: float, V_T: float) -> float:
        """ Показатель роста спирали на радиан: V_T / sqrt(V_s² − V_T²) """
        if not V_s > V_T:
            raise SlowSweeper(f"spiral geometry needs V_s > V_T, got V_s={V_s}, V_T={V_T}")
        return V_T / math.sqrt(V_s ** 2 - V_T ** 2)

    @staticmethod
    def sector_growth_factor(n: int, V_s: float, V_T: float) -> float:
        """ E = exp(2π·V_T / (n·sqrt(V_s² − V_T²))), рост радиуса за сектор 2π/n """
        return math.exp(2 * math.pi / n * CoreModel.spiral_growth_rate(V_s, V_T))

    @staticmethod
    def spiral_radius_after_angle(R_start: float, r: float, theta: float, V_s: float, V_T: float) -> SpiralArc:
        """
        Радиус центра сенсора после прохода угла theta по внешней спирали.

        Сенсор стартует касаясь внешним концом окружности R_start,
        то есть центр сенсора на радиусе R_start − r.

        Returns:
            SpiralArc: (радиус, затраченное время t_theta)
        """
        if not R_start > r:
            raise RegionSmallerThanSensor(f"R_start={R_start} must exceed r={r}")
        if theta < 0:
            raise NonPositiveParameter(f"theta must be non-negative, got {theta}")
        start = R_start - r
        radius = start * math.exp(theta * CoreModel.spiral_growth_rate(V_s, V_T))
        return SpiralArc(radius=radius, elapsed=(radius - start) / V_T)

    @staticmethod
    def ceil_with_tie(value: float, tie: float = 1e-9) -> int:
        """ Потолок с допуском: значение в пределах tie от целого округляется к нему """
        nearest = round(value)
        if abs(value - nearest) <= tie:
            return int(nearest)
        return int(math.ceil(value))

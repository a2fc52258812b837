import functools
from typing import NamedTuple

from CoreModel import ScenarioParams
from CircularPincer import CircularPincer
from SpiralPincer import SpiralPincer
from CircularSame import CircularSame
from SpiralSame import SpiralSame, BAND
from Exceptions import UnknownStrategy


class TimeRow(NamedTuple):
    N: int
    T_in: float
    T_traverse: float
    T_endgame: float
    T_total: float


class Strategies:
    """
    Реестр стратегий: единый вход для командной строки и исследований.

    Каноническая критическая скорость: для кругового обхода в одном
    направлении берется линеаризованное значение.
    """
    REGISTRY = {
        CircularPincer.NAME: CircularPincer,
        SpiralPincer.NAME: SpiralPincer,
        CircularSame.NAME: CircularSame,
        SpiralSame.NAME: SpiralSame,
    }
    NAMES = tuple(REGISTRY)
    ABBREVIATIONS = {
        CircularPincer.NAME: "cp",
        SpiralPincer.NAME: "sp",
        CircularSame.NAME: "cs",
        SpiralSame.NAME: "ss",
    }
    # семейство: (strategy_a, strategy_b), отношение времен T_a/T_b
    FAMILIES = {
        "circular": (CircularSame.NAME, CircularPincer.NAME),
        "spiral": (SpiralSame.NAME, SpiralPincer.NAME),
    }

    @staticmethod
    def get(name):
        try:
            return Strategies.REGISTRY[name]
        except KeyError:
            raise UnknownStrategy(f"unknown strategy {name!r}, expected one of {Strategies.NAMES}")

    @staticmethod
    def family_of(name):
        for family, members in Strategies.FAMILIES.items():
            if name in members:
                return family
        raise UnknownStrategy(f"unknown strategy {name!r}")

    @staticmethod
    def critical_velocity(name, params: ScenarioParams) -> float:
        return _critical_velocity(name, params.with_dv(0.0))

    @staticmethod
    def total_time(name, params: ScenarioParams, V_s: float, mode=BAND) -> float:
        strategy = Strategies.get(name)
        if strategy is SpiralSame:
            return SpiralSame.total_time(params, V_s, mode)
        if strategy is CircularSame:
            return CircularSame.total_time(params, V_s)
        return strategy.time_breakdown(params, V_s).T_total

    @staticmethod
    def time_row(name, params: ScenarioParams, V_s: float, mode=BAND) -> TimeRow:
        """
        Разбивка времени по фазам: заход внутрь, основной обход, финал.
        У клещевых стратегий отдельного финала нет (T_endgame = 0).
        """
        strategy = Strategies.get(name)
        if strategy is CircularPincer:
            report = CircularPincer.time_breakdown(params, V_s)
            return TimeRow(report.N_n, report.T_in, report.T_circular, 0.0, report.T_total)
        if strategy is SpiralPincer:
            report = SpiralPincer.time_breakdown(params, V_s)
            return TimeRow(report.N_total, report.T_in, report.T_spiral, 0.0, report.T_total)
        if strategy is CircularSame:
            CircularSame.endgame(params, V_s)
            report = CircularSame.time_breakdown(params, V_s)
            return TimeRow(report.N_n, report.T_in, report.T_circular, report.T_linear, report.T_total)

        report = SpiralSame.time_breakdown(params, V_s, mode)
        game = report.endgame
        return TimeRow(report.N_n, report.T_in + game.T_e + game.T_f, report.T_spiral + game.T_l,
                       game.T_linear, report.T_total)

    @staticmethod
    def trajectory_plan(name, params: ScenarioParams, V_s: float, enforce=True):
        return Strategies.get(name).trajectory_plan(params, V_s, enforce=enforce)


@functools.lru_cache(maxsize=512)
def _critical_velocity(name, params):
    strategy = Strategies.get(name)
    if strategy is CircularSame:
        return CircularSame.critical_velocity(params).linearized
    if strategy is SpiralSame:
        return SpiralSame.solve_phi_and_critical_velocity(params).V_c
    return strategy.critical_velocity(params)

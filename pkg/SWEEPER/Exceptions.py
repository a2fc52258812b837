from dataclasses import dataclass


# Коды выхода для командной строки
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_ESCAPE = 3


class SweepError(Exception):
    """
    Базовая ошибка всех расчетов.

    exit_code показывает, с каким кодом завершится команда терминала,
    если ошибка дошла до SweepTerminal.
    """
    exit_code = EXIT_USAGE


# --- ошибки параметров сценария (неверное использование) ---

class OddSwarm(SweepError):
    pass


class NonPositiveParameter(SweepError):
    pass


class RegionSmallerThanSensor(SweepError):
    pass


class ResolutionTooCoarse(SweepError):
    pass


class UnknownStrategy(SweepError):
    pass


# --- сценарий корректен, но стратегия неосуществима ---

class InfeasibleScenario(SweepError):
    exit_code = EXIT_INFEASIBLE


class SlowSweeper(InfeasibleScenario):
    pass


class SubcriticalVelocity(InfeasibleScenario):
    pass


class NoConvergence(InfeasibleScenario):
    pass


class SeedDomain(InfeasibleScenario):
    pass


class RadiusTooSmall(InfeasibleScenario):
    pass


class EndgameInfeasible(InfeasibleScenario):
    pass


class LinearScanInfeasible(InfeasibleScenario):
    pass


@dataclass(frozen=True)
class FormulaDiscrepancy:
    """ Диагностика: печатная формула не совпала с суммой компонент. Не выбрасывается. """
    name: str
    printed: float
    component_sum: float

    @property
    def relative_gap(self):
        return abs(self.printed - self.component_sum) / abs(self.component_sum)

    def __str__(self):
        return (f"{self.name}: printed formula {self.printed!r} differs from "
                f"component sum {self.component_sum!r} (relative gap {self.relative_gap:.3e})")

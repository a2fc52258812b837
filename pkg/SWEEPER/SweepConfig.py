import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from CoreModel import ScenarioParams
from Exceptions import SweepError


class ConfigError(SweepError):
    pass


# имя поля: (переменная окружения, значение по умолчанию, преобразование)
ENVIRONMENT = {
    "R0": ("SWEEP_R0", 100.0, float),
    "r": ("SWEEP_R", 10.0, float),
    "vt": ("SWEEP_VT", 1.0, float),
    "n": ("SWEEP_N", 2, int),
    "n_max": ("SWEEP_N_MAX", 32, int),
    "dv": ("SWEEP_DV", "5,10,20,35", str),
    "strategy": ("SWEEP_STRATEGY", "circular-pincer", str),
    "family": ("SWEEP_FAMILY", None, str),
    "cell": ("SWEEP_CELL", None, float),
    "dt": ("SWEEP_DT", None, float),
    "radius_mode": ("SWEEP_RADIUS_MODE", "band", str),
    "wall_budget": ("SWEEP_WALL_BUDGET", 600.0, float),
    "workers": ("SWEEP_WORKERS", 1, int),
}


def parse_dv_list(text):
    """ '5,10,20,35' -> [5.0, 10.0, 20.0, 35.0]; отрицательные значения допустимы """
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        values = [float(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--dv expects a comma separated list of numbers, got {text!r}")
    if not values:
        raise ConfigError("--dv list is empty")
    return values


@dataclass(frozen=True)
class SweepConfig:
    R0: float
    r: float
    vt: float
    n: int
    n_max: int
    dv: tuple
    strategy: str
    family: Optional[str]
    cell: Optional[float]
    dt: Optional[float]
    radius_mode: str
    wall_budget: float
    workers: int
    vs: Optional[float] = None
    out: Optional[str] = None
    trace: Optional[str] = None

    @property
    def params(self) -> ScenarioParams:
        # запас скорости применяется отдельно (может быть отрицательным)
        return ScenarioParams(R0=self.R0, r=self.r, V_T=self.vt, n=self.n)

    @property
    def cell_size(self):
        return self.cell if self.cell is not None else self.R0 / 200

    @staticmethod
    def resolve(args=None, environ=None) -> "SweepConfig":
        """
        Собирает конфигурацию: флаг > переменная окружения SWEEP_* > значение по умолчанию.

        Args:
            args (Namespace): Разобранные флаги, отсутствующие флаги равны None.
            environ (dict): Окружение, по умолчанию os.environ после загрузки .env.

        Returns:
            SweepConfig: Итоговая конфигурация.
        """
        if environ is None:
            load_dotenv()
            environ = os.environ
        values = {}
        for name, (variable, default, cast) in ENVIRONMENT.items():
            value = getattr(args, name, None) if args is not None else None
            if value is None and environ.get(variable) not in (None, ""):
                try:
                    value = cast(environ[variable])
                except ValueError:
                    raise ConfigError(f"environment variable {variable}={environ[variable]!r} is not a valid {cast.__name__}")
            values[name] = default if value is None else value

        values["dv"] = tuple(parse_dv_list(values["dv"]))
        for name in ("vs", "out", "trace"):
            values[name] = getattr(args, name, None) if args is not None else None
        return SweepConfig(**values)

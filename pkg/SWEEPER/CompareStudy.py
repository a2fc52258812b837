import io
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, astuple, fields

import numpy as np
import pandas as pd
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from CoreModel import CoreModel, ScenarioParams
from CircularSame import CircularSame
from SpiralSame import SpiralSame, BAND
from Strategies import Strategies
from Exceptions import InfeasibleScenario


logger_info = logging.getLogger('info_logger')
logger_error = logging.getLogger('error_logger')

COMPARISON_COLUMNS = ["n", "dV", "strategy_a", "strategy_b", "V_ca", "V_cb", "T_a", "T_b", "ratio", "feasible"]
CRITICAL_COLUMNS = ["n", "V_LB", "Vc_cp", "Vc_sp", "Vc_cs", "Vc_ss"]
TIME_COLUMNS = ["n", "dV", "strategy", "V_s", "N", "T_in", "T_traverse", "T_endgame", "T_total", "feasible"]

DEFAULT_DV = (5.0, 10.0, 20.0, 35.0)


@dataclass(frozen=True)
class ComparisonRecord:
    n: int
    dV: float
    strategy_a: str
    strategy_b: str
    V_ca: float
    V_cb: float
    T_a: float
    T_b: float
    ratio: float
    feasible: bool


@dataclass(frozen=True)
class TimeRecord:
    n: int
    dV: float
    strategy: str
    V_s: float
    N: int
    T_in: float
    T_traverse: float
    T_endgame: float
    T_total: float
    feasible: bool


def even_range(n_min, n_max):
    return list(range(n_min + n_min % 2, n_max + 1, 2))


def _ordered_map(function, items, workers):
    """ Результаты в порядке items при любом порядке завершения """
    if workers is None or workers <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


class CompareStudy:
    """
    Исследования по сетке параметров: сравнение пар стратегий, таблица
    критических скоростей, времена по стратегии. Вывод - детерминированный CSV и SVG.
    """

    @staticmethod
    def family_baseline(family, params: ScenarioParams) -> float:
        """
        Базовая скорость честного сравнения: критическая скорость двух агентов
        в одном направлении для данного семейства.
        """
        base = params.with_n(2)
        if family == "circular":
            return CircularSame.critical_velocity(base).linearized
        if family == "spiral":
            return SpiralSame.solve_phi_and_critical_velocity(base).V_c
        raise ValueError(f"unknown family {family!r}")

    @staticmethod
    def _comparison_cell(params, n, dV, strategy_a, strategy_b, V_base, mode):
        p = params.with_n(n)
        V_s = V_base + dV
        values = {}
        for key, name in (("a", strategy_a), ("b", strategy_b)):
            try:
                values["V_c" + key] = Strategies.critical_velocity(name, p)
            except InfeasibleScenario as e:
                logger_error.error(f"n={n} {name}: {e}")
                values["V_c" + key] = math.nan
            try:
                values["T_" + key] = Strategies.total_time(name, p, V_s, mode)
            except InfeasibleScenario as e:
                logger_info.info(f"n={n} dV={dV} {name} infeasible: {e}")
                values["T_" + key] = math.nan

        feasible = math.isfinite(values["T_a"]) and math.isfinite(values["T_b"])
        ratio = values["T_a"] / values["T_b"] if feasible else math.nan
        return ComparisonRecord(n=n, dV=dV, strategy_a=strategy_a, strategy_b=strategy_b,
                                V_ca=values["V_ca"], V_cb=values["V_cb"], T_a=values["T_a"],
                                T_b=values["T_b"], ratio=ratio, feasible=feasible)

    @staticmethod
    def study_compare(params: ScenarioParams, n_values, dv_values, strategy_a, strategy_b,
                      family=None, mode=BAND, workers=1) -> list:
        """
        Сравнение двух стратегий на сетке (n, dV).

        Обе стратегии идут со скоростью V_base + dV, где V_base - критическая
        скорость двух агентов в одном направлении семейства (по умолчанию -
        семейства strategy_a). Неосуществимые ячейки остаются в таблице с feasible=false.

        Returns:
            list: ComparisonRecord в порядке (n, dV).
        """
        family = Strategies.family_of(strategy_a) if family is None else family
        V_base = CompareStudy.family_baseline(family, params)
        logger_info.info(f"compare {strategy_a}/{strategy_b}: baseline V={V_base!r} ({family})")
        cells = [(n, dV) for n in n_values for dV in dv_values]
        return _ordered_map(
            lambda cell: CompareStudy._comparison_cell(params, cell[0], cell[1], strategy_a, strategy_b,
                                                       V_base, mode),
            cells, workers)

    @staticmethod
    def _critical_row(params, n):
        p = params.with_n(n)
        row = {"n": n, "V_LB": CoreModel.lower_bound_velocity(p)}
        for name in Strategies.NAMES:
            column = "Vc_" + Strategies.ABBREVIATIONS[name]
            try:
                row[column] = Strategies.critical_velocity(name, p)
            except InfeasibleScenario as e:
                logger_error.error(f"critical velocity of {name} at n={n}: {e}")
                row[column] = math.nan
        if not CompareStudy.ordering_holds(row):
            logger_error.error(f"critical velocity ordering violated at n={n}: {row}")
        return row

    @staticmethod
    def ordering_holds(row) -> bool:
        """ V_LB < sp < cp < cs, sp < ss < cs """
        return bool(row["V_LB"] < row["Vc_sp"] < row["Vc_cp"] < row["Vc_cs"]
                    and row["Vc_sp"] < row["Vc_ss"] < row["Vc_cs"])

    @staticmethod
    def study_critical_velocities(params: ScenarioParams, n_values, workers=1) -> list:
        return _ordered_map(lambda n: CompareStudy._critical_row(params, n), list(n_values), workers)

    @staticmethod
    def _time_cell(params, n, dV, strategy, mode):
        p = params.with_n(n)
        V_s = math.nan
        try:
            V_s = Strategies.critical_velocity(strategy, p) + dV
            row = Strategies.time_row(strategy, p, V_s, mode)
        except InfeasibleScenario as e:
            logger_info.info(f"n={n} dV={dV} {strategy} infeasible: {e}")
            return TimeRecord(n=n, dV=dV, strategy=strategy, V_s=V_s, N=None, T_in=math.nan,
                              T_traverse=math.nan, T_endgame=math.nan, T_total=math.nan, feasible=False)
        return TimeRecord(n=n, dV=dV, strategy=strategy, V_s=V_s, N=row.N, T_in=row.T_in,
                          T_traverse=row.T_traverse, T_endgame=row.T_endgame, T_total=row.T_total,
                          feasible=True)

    @staticmethod
    def study_total_times(params: ScenarioParams, n_values, dv_values, strategy, mode=BAND, workers=1) -> list:
        """ Времена одной стратегии при V_s = V_c(n) + dV """
        cells = [(n, dV) for n in n_values for dV in dv_values]
        return _ordered_map(lambda cell: CompareStudy._time_cell(params, cell[0], cell[1], strategy, mode),
                            cells, workers)

    # ---------- CSV ----------

    @staticmethod
    def format_value(value) -> str:
        """ 9 значащих цифр без экспоненты; nan/None - пустое поле """
        if value is None:
            return ""
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, str):
            return value
        if not math.isfinite(value):
            return ""
        text = np.format_float_positional(float(value), precision=9, unique=False, fractional=False, trim="-")
        return "0" if text in ("-0", "-0.") else text

    @staticmethod
    def to_frame(rows, columns) -> pd.DataFrame:
        """ Таблица из dataclass-записей или словарей, все значения уже отформатированы строками """
        if rows and not isinstance(rows[0], dict):
            rows = [dict(zip([f.name for f in fields(row)], astuple(row))) for row in rows]
        formatted = [[CompareStudy.format_value(row[column]) for column in columns] for row in rows]
        return pd.DataFrame(formatted, columns=columns, dtype=str)

    @staticmethod
    def to_csv_text(rows, columns) -> str:
        return CompareStudy.to_frame(rows, columns).to_csv(index=False, lineterminator="\n")

    @staticmethod
    def write_csv(rows, columns, path) -> str:
        text = CompareStudy.to_csv_text(rows, columns)
        with open(path, "w", encoding="utf-8", newline="") as file:
            file.write(text)
        return text

    # ---------- SVG ----------

    @staticmethod
    def _plot_comparison(ax, table):
        for dV, group in table.groupby("dV", sort=True):
            ax.plot(group["n"], group["ratio"], marker="o", label=f"dV = {dV:g}")
        ax.axhline(1.0, color="gray", linewidth=0.8)
        ax.set_ylabel("T_a / T_b")
        if not table.empty:
            ax.set_title(f"{table['strategy_a'].iloc[0]} / {table['strategy_b'].iloc[0]}")

    @staticmethod
    def _plot_critical(ax, table):
        for column in CRITICAL_COLUMNS[1:]:
            ax.plot(table["n"], table[column], marker="o", label=column)
        ax.set_ylabel("critical velocity")

    @staticmethod
    def _plot_times(ax, table):
        for dV, group in table.groupby("dV", sort=True):
            ax.plot(group["n"], group["T_total"], marker="o", label=f"dV = {dV:g}")
        ax.set_ylabel("total time")
        if not table.empty:
            ax.set_title(str(table["strategy"].iloc[0]))

    PLOTS = {
        "comparison": "_plot_comparison",
        "critical": "_plot_critical",
        "times": "_plot_times",
    }

    @staticmethod
    def plot_svg(csv_text, kind, path):
        """
        Рисует таблицу в SVG. Данные берутся из текста CSV, сам текст
        кладется в метаданные файла (Description).
        """
        if kind not in CompareStudy.PLOTS:
            raise ValueError(f"unknown plot kind {kind!r}, expected one of {tuple(CompareStudy.PLOTS)}")
        table = pd.read_csv(io.StringIO(csv_text))
        plt.rcParams["svg.hashsalt"] = "sweeper"
        fig, ax = plt.subplots(figsize=(7, 4.5))
        getattr(CompareStudy, CompareStudy.PLOTS[kind])(ax, table)
        ax.set_xlabel("n")
        ax.grid(True, linewidth=0.4)
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Description": csv_text, "Date": None})
        plt.close(fig)
        logger_info.info(f"plot {kind} written to {path}")
        return path

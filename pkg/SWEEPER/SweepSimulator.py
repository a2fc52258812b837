import math
import time
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from scipy import ndimage
from matplotlib.path import Path

from CoreModel import CoreModel, ScenarioParams
from Exceptions import ResolutionTooCoarse
from TrajectoryPlan import TrajectoryPlan, sensor_segments


logger_info = logging.getLogger('info_logger')

CLEANED = "Cleaned"
ESCAPE = "Escape"
TIMEOUT = "Timeout"

# Радиус шаблона распространения в клетках (шаблон 5x5 без углов)
STENCIL_REACH = 2.3
STENCIL_HALF = 2


@dataclass
class SimWorld:
    """
    Сеточная модель области уклоняющихся.

    arrival: время, с которого клетка считается занятой (inf - клетка свободна).
    candidate: для свободной клетки - самое раннее время, когда до нее дойдут
        уклоняющиеся из занятых соседей, min(arrival + d/V_T); для занятой - inf.
    """
    params: ScenarioParams
    cell: float
    dt: float
    L: float
    centers: np.ndarray
    arrival: np.ndarray
    candidate: np.ndarray
    agents: np.ndarray
    outer: np.ndarray
    count: int
    clock: float = 0.0
    steps: int = 0
    breached: bool = False
    plan: Optional[TrajectoryPlan] = None

    @property
    def occupancy(self):
        return np.isfinite(self.arrival)

    def occupied_count(self):
        return int(np.count_nonzero(np.isfinite(self.arrival)))

    def occupied_area(self):
        return self.count * self.cell ** 2


@dataclass
class SimOutcome:
    kind: str
    time: float
    steps: int
    trace: list = field(default_factory=list)

    @property
    def cleaned(self):
        return self.kind == CLEANED


def _stencil(cell, V_T):
    """ footprint 5x5 и задержка d/V_T для каждого смещения """
    offsets = np.arange(-STENCIL_HALF, STENCIL_HALF + 1)
    dist = np.hypot(offsets[:, None], offsets[None, :])
    footprint = dist <= STENCIL_REACH
    delay = np.where(footprint, dist * cell / V_T, 0.0)
    return footprint, delay


def _candidate_field(arrival, cell, V_T):
    if V_T <= 0:
        return np.full(arrival.shape, np.inf)
    footprint, delay = _stencil(cell, V_T)
    candidate = ndimage.grey_erosion(arrival, footprint=footprint, structure=-delay,
                                     mode="constant", cval=np.inf)
    candidate[np.isfinite(arrival)] = np.inf
    return candidate


def _point_segment_distance(points, a, b):
    ab = b - a
    length2 = float(ab @ ab)
    if length2 == 0.0:
        return np.hypot(*(points - a).T)
    s = np.clip((points - a) @ ab / length2, 0.0, 1.0)
    nearest = a + s[:, None] * ab
    return np.hypot(*(points - nearest).T)


def _window(rows, cols, margin, size):
    return (slice(max(int(rows.min()) - margin, 0), min(int(rows.max()) + margin + 1, size)),
            slice(max(int(cols.min()) - margin, 0), min(int(cols.max()) + margin + 1, size)))


class SweepSimulator:
    """
    Дискретный по времени оракул: исполняет план движения роя на сетке
    и проверяет удержание, очистку и время очистки.

    Расширение области ведется по полю времен прихода: клетка занимается,
    когда до нее доходит фронт из занятого соседа со скоростью V_T.
    Поле candidate обновляется локально - вокруг новых занятых и стертых клеток.
    """
    DEFAULT_WALL_BUDGET = 600.0

    @staticmethod
    def default_dt(cell, V_s, V_T, plan: Optional[TrajectoryPlan] = None):
        """ Шаг по времени, удовлетворяющий V_s·dt <= cell и V_T·dt <= cell с запасом 0.9 """
        speed = max(V_s, V_T, plan.max_speed() if plan is not None else 0.0)
        return 0.9 * cell / speed

    @staticmethod
    def init_world(params: ScenarioParams, cell: float, dt: float, plan: Optional[TrajectoryPlan] = None,
                   V_s: Optional[float] = None) -> SimWorld:
        """
        Создает мир: занятые клетки - центры внутри круга R0, агенты в стартовых позах плана.

        Args:
            params (ScenarioParams): Сценарий (R0 = 0 дает пустой мир).
            cell (float): Размер клетки.
            dt (float): Шаг по времени.
            plan (TrajectoryPlan): План, из которого берутся стартовые позы и скорость.
            V_s (float): Скорость агентов; по умолчанию наибольшая скорость фаз плана.

        Returns:
            SimWorld: Начальное состояние.
        """
        if not cell > 0 or not dt > 0:
            raise ResolutionTooCoarse(f"cell={cell} and dt={dt} must both be positive")
        if V_s is None:
            V_s = max(plan.V_s, plan.max_speed()) if plan is not None else 0.0
        if params.V_T * dt > cell:
            raise ResolutionTooCoarse(f"evader spread per step V_T*dt={params.V_T * dt} exceeds cell={cell}")
        if V_s * dt > cell:
            raise ResolutionTooCoarse(f"sweeper travel per step V_s*dt={V_s * dt} exceeds cell={cell}")

        L = params.R0 + 2 * params.r + 6 * cell
        half = int(math.ceil(L / cell))
        centers = (np.arange(-half, half) + 0.5) * cell
        X, Y = np.meshgrid(centers, centers, indexing="xy")
        radius = np.hypot(X, Y)
        if params.R0 > 0:
            arrival = np.where(radius <= params.R0, 0.0, np.inf)
        else:
            arrival = np.full(X.shape, np.inf)
        # клетки, занятость которых означает уход уклоняющихся (запас 2·cell)
        outer = radius > params.R0 + 2 * params.r + 2 * cell

        agents = plan.pose_at(0.0) if plan is not None else np.zeros((0, 3))
        return SimWorld(params=params, cell=cell, dt=dt, L=half * cell, centers=centers,
                        arrival=arrival, candidate=_candidate_field(arrival, cell, params.V_T),
                        agents=np.asarray(agents, dtype=float).reshape(-1, 3), outer=outer,
                        count=int(np.count_nonzero(np.isfinite(arrival))), plan=plan)

    @staticmethod
    def _dilate(world: SimWorld, t_next: float):
        """ Свободные клетки с candidate <= t_next занимаются; их соседи получают новые candidate """
        V_T = world.params.V_T
        if V_T <= 0:
            return
        ii, jj = np.nonzero(world.candidate <= t_next)
        if ii.size == 0:
            return
        reached = world.candidate[ii, jj]
        world.arrival[ii, jj] = reached
        world.candidate[ii, jj] = np.inf
        world.count += int(ii.size)
        if world.outer[ii, jj].any():
            world.breached = True

        size = world.arrival.shape[0]
        footprint, delay = _stencil(world.cell, V_T)
        for di, dj in zip(*np.nonzero(footprint)):
            if di == STENCIL_HALF and dj == STENCIL_HALF:
                continue
            ti = ii + di - STENCIL_HALF
            tj = jj + dj - STENCIL_HALF
            inside = (ti >= 0) & (ti < size) & (tj >= 0) & (tj < size)
            ti, tj, value = ti[inside], tj[inside], reached[inside] + delay[di, dj]
            free = ~np.isfinite(world.arrival[ti, tj])
            ti, tj, value = ti[free], tj[free], value[free]
            world.candidate[ti, tj] = np.minimum(world.candidate[ti, tj], value)

    @staticmethod
    def _erase(world: SimWorld, before, after):
        """
        Находит занятые клетки внутри четырехугольника, заметенного каждым
        сенсором за шаг, и в полосе cell/2 вокруг его сторон.

        Returns:
            list: Для каждого агента пара массивов (строки, столбцы).
        """
        cell, centers = world.cell, world.centers
        groups = []
        seg0 = sensor_segments(before, world.params.r)
        seg1 = sensor_segments(after, world.params.r)
        for (a0, b0), (a1, b1) in zip(seg0, seg1):
            quad = np.array([a0, b0, b1, a1])
            low = quad.min(axis=0) - cell
            high = quad.max(axis=0) + cell
            cols = np.nonzero((centers >= low[0]) & (centers <= high[0]))[0]
            rows = np.nonzero((centers >= low[1]) & (centers <= high[1]))[0]
            if rows.size == 0 or cols.size == 0:
                continue
            box = (slice(rows[0], rows[-1] + 1), slice(cols[0], cols[-1] + 1))
            occupied = np.isfinite(world.arrival[box])
            if not occupied.any():
                continue
            ii, jj = np.nonzero(occupied)
            points = np.column_stack([centers[cols[0] + jj], centers[rows[0] + ii]])
            hit = Path(quad).contains_points(points)
            for p, q in zip(quad, np.roll(quad, -1, axis=0)):
                hit |= _point_segment_distance(points, p, q) <= cell / 2
            if hit.any():
                groups.append((rows[0] + ii[hit], cols[0] + jj[hit]))
        return groups

    @staticmethod
    def _clear(world: SimWorld, rows, cols, t_now):
        """
        Стирает клетки. Занятые соседи стертых клеток не распространяются
        раньше t − cell/(2·V_T); candidate пересчитывается в окрестности.
        """
        still = np.isfinite(world.arrival[rows, cols])
        rows, cols = rows[still], cols[still]
        if rows.size == 0:
            return
        world.arrival[rows, cols] = np.inf
        world.count -= int(rows.size)

        V_T = world.params.V_T
        if V_T <= 0:
            return
        size = world.arrival.shape[0]
        footprint, _ = _stencil(world.cell, V_T)

        box = _window(rows, cols, STENCIL_HALF, size)
        window = world.arrival[box]
        mask = np.zeros(window.shape, dtype=bool)
        mask[rows - box[0].start, cols - box[1].start] = True
        near = ndimage.binary_dilation(mask, structure=footprint) & np.isfinite(window)
        window[near] = np.maximum(window[near], t_now - 0.5 * world.cell / V_T)

        # candidate зависит от arrival в радиусе шаблона: пересчет на 2 шаблона вокруг
        inner = _window(rows, cols, 2 * STENCIL_HALF, size)
        outer = _window(rows, cols, 3 * STENCIL_HALF, size)
        local = _candidate_field(world.arrival[outer], world.cell, V_T)
        r0, c0 = inner[0].start - outer[0].start, inner[1].start - outer[1].start
        world.candidate[inner] = local[r0:r0 + (inner[0].stop - inner[0].start),
                                       c0:c0 + (inner[1].stop - inner[1].start)]

    @staticmethod
    def step(world: SimWorld, plan: Optional[TrajectoryPlan] = None) -> SimWorld:
        """
        Один шаг: расширение области на V_T·dt, стирание заметенных клеток,
        перемещение агентов по активной фазе, clock += dt.
        Без плана агенты стоят на месте.
        """
        plan = world.plan if plan is None else plan
        t_next = world.clock + world.dt
        before = world.agents
        after = plan.pose_at(t_next) if plan is not None and before.size else before

        SweepSimulator._dilate(world, t_next)
        if before.size:
            for rows, cols in SweepSimulator._erase(world, before, after):
                SweepSimulator._clear(world, rows, cols, t_next)

        world.agents = np.asarray(after, dtype=float).reshape(-1, 3)
        world.clock = t_next
        world.steps += 1
        return world

    @staticmethod
    def escaped(world: SimWorld) -> bool:
        """ Есть занятая клетка дальше R0 + 2r + 2·cell от центра """
        return world.breached or bool(np.isfinite(world.arrival[world.outer]).any())

    @staticmethod
    def _trace_row(world: SimWorld):
        return [world.clock, world.occupied_area(), *np.asarray(world.agents).ravel()]

    @staticmethod
    def run(plan: TrajectoryPlan, world: SimWorld, wall_budget: float = DEFAULT_WALL_BUDGET,
            trace=False, progress=None) -> SimOutcome:
        """
        Исполняет план до очистки, ухода уклоняющихся или исчерпания бюджета времени.

        Args:
            plan (TrajectoryPlan): План движения.
            world (SimWorld): Мир, построенный для того же сценария.
            wall_budget (float): Бюджет реального времени в секундах.
            trace (bool): Сохранять ли строку трассы на каждом шаге.
            progress (callable): Получает процент пройденного времени плана.

        Returns:
            SimOutcome: Cleaned, Escape или Timeout.
        """
        rows = [SweepSimulator._trace_row(world)] if trace else []
        if world.count == 0:
            return SimOutcome(kind=CLEANED, time=world.clock, steps=world.steps, trace=rows)

        started = time.monotonic()
        horizon = plan.total_duration
        while True:
            SweepSimulator.step(world, plan)
            if trace:
                rows.append(SweepSimulator._trace_row(world))
            if progress is not None and horizon > 0:
                progress(min(100.0, 100.0 * world.clock / horizon))

            if world.count == 0:
                kind = CLEANED
                break
            if world.breached or world.clock >= horizon:
                kind = ESCAPE
                break
            if time.monotonic() - started > wall_budget:
                kind = TIMEOUT
                break

        logger_info.info(f"simulation {plan.strategy} n={plan.n} V_s={plan.V_s!r}: {kind} "
                         f"at t={world.clock!r} after {world.steps} steps")
        return SimOutcome(kind=kind, time=world.clock, steps=world.steps, trace=rows)

    @staticmethod
    def trace_columns(n):
        columns = ["t", "area"]
        for i in range(n):
            columns += [f"agent_{i}_x", f"agent_{i}_y", f"agent_{i}_angle"]
        return columns

    @staticmethod
    def trace_frame(outcome: SimOutcome, n: int) -> pd.DataFrame:
        return pd.DataFrame(outcome.trace, columns=SweepSimulator.trace_columns(n))

    @staticmethod
    def simulate(params: ScenarioParams, plan: TrajectoryPlan, cell: Optional[float] = None,
                 dt: Optional[float] = None, wall_budget: float = DEFAULT_WALL_BUDGET,
                 trace=False, progress=None) -> SimOutcome:
        """ init_world + run с шагами по умолчанию: cell = R0/200, dt из условий устойчивости """
        CoreModel.validate_scenario(params)
        cell = params.R0 / 200 if cell is None else cell
        dt = SweepSimulator.default_dt(cell, plan.V_s, params.V_T, plan) if dt is None else dt
        world = SweepSimulator.init_world(params, cell, dt, plan=plan)
        return SweepSimulator.run(plan, world, wall_budget=wall_budget, trace=trace, progress=progress)

import math
from dataclasses import dataclass, field

import numpy as np


# Виды фаз плана
ARC = "arc"
SPIRAL_OUT = "spiral-out"
SPIRAL_IN = "spiral-in"
INWARD_ADVANCE = "inward-advance"
DIRECTION_SWITCH = "direction-switch"
LINEAR_LEG = "linear-leg"


def _polar(rho, theta):
    return rho * math.cos(theta), rho * math.sin(theta)


class Hold:
    """ Агент стоит на месте (переключение направления) """

    def __init__(self, pose):
        self._pose = np.asarray(pose, dtype=float)

    def pose(self, tau):
        return self._pose.copy()

    def speed(self):
        return 0.0


class ArcMotion:
    """ Движение по окружности radius со скоростью V, сенсор направлен по радиусу """

    def __init__(self, radius, theta0, direction, V):
        self.radius = radius
        self.theta0 = theta0
        self.direction = direction
        self.V = V

    def theta(self, tau):
        return self.theta0 + self.direction * self.V * tau / self.radius

    def pose(self, tau):
        theta = self.theta(tau)
        x, y = _polar(self.radius, theta)
        return np.array([x, y, theta])

    def speed(self):
        return self.V


class SpiralMotion:
    """
    Спираль: радиус центра сенсора меняется со скоростью V_T,
    касательная скорость sqrt(V_s² − V_T²), курс отклонен от касательной на asin(V_T/V_s).
    Сенсор направлен по радиусу: его концы идут по окружностям, растущим со скоростью V_T.

    outward=True - раскручивание наружу, False - скручивание к центру.
    direction: +1 против часовой стрелки, -1 по часовой.
    """

    def __init__(self, rho0, theta0, direction, V_s, V_T, outward=True):
        self.rho0 = rho0
        self.theta0 = theta0
        self.direction = direction
        self.V_s = V_s
        self.V_T = V_T
        self.sign = 1.0 if outward else -1.0
        self.w = math.sqrt(V_s ** 2 - V_T ** 2)

    def rho(self, tau):
        return self.rho0 + self.sign * self.V_T * tau

    def theta(self, tau):
        rho = self.rho(tau)
        return self.theta0 + self.direction * (self.w / self.V_T) * abs(math.log(rho / self.rho0))

    def duration_for_angle(self, angle):
        factor = math.exp(angle * self.V_T / self.w)
        rho1 = self.rho0 * factor if self.sign > 0 else self.rho0 / factor
        return abs(rho1 - self.rho0) / self.V_T

    def pose(self, tau):
        theta = self.theta(tau)
        x, y = _polar(self.rho(tau), theta)
        return np.array([x, y, theta])

    def speed(self):
        return self.V_s


class RadialMotion:
    """ Перемещение вдоль луча theta от rho_from к rho_to за duration """

    def __init__(self, theta, rho_from, rho_to, duration):
        self.theta = theta
        self.rho_from = rho_from
        self.rho_to = rho_to
        self.duration = duration

    def pose(self, tau):
        frac = 1.0 if self.duration <= 0 else min(max(tau / self.duration, 0.0), 1.0)
        rho = self.rho_from + (self.rho_to - self.rho_from) * frac
        x, y = _polar(rho, self.theta)
        return np.array([x, y, self.theta])

    def speed(self):
        if self.duration <= 0:
            return 0.0
        return abs(self.rho_to - self.rho_from) / self.duration


class LinearMotion:
    """ Прямолинейный участок финала: все агенты сдвигаются параллельно """

    def __init__(self, start, heading, V, angle):
        self.start = np.asarray(start, dtype=float)
        self.heading = np.asarray(heading, dtype=float)
        self.V = V
        self.angle = angle

    def pose(self, tau):
        x, y = self.start + self.heading * self.V * tau
        return np.array([x, y, self.angle])

    def speed(self):
        return abs(self.V)


@dataclass
class Phase:
    kind: str
    duration: float
    motions: list

    def poses(self, tau):
        tau = min(max(tau, 0.0), self.duration)
        return np.array([motion.pose(tau) for motion in self.motions])


@dataclass
class TrajectoryPlan:
    """
    Упорядоченный список фаз движения роя.

    Позы агентов - (x, y, angle), где angle - направление отрезка сенсора длиной 2r.
    """
    strategy: str
    n: int
    r: float
    V_s: float
    phases: list = field(default_factory=list)

    @property
    def total_duration(self):
        return float(sum(phase.duration for phase in self.phases))

    def phase_starts(self):
        durations = np.array([phase.duration for phase in self.phases], dtype=float)
        return np.concatenate(([0.0], np.cumsum(durations)[:-1]))

    def pose_at(self, t):
        """ Позы всех агентов в момент t (после конца плана - последние позы) """
        if not self.phases:
            return np.zeros((0, 3))
        starts = self.phase_starts()
        ends = starts + np.array([phase.duration for phase in self.phases])
        idx = int(np.searchsorted(ends, t, side="left"))
        idx = min(idx, len(self.phases) - 1)
        return self.phases[idx].poses(t - starts[idx])

    def max_speed(self):
        speeds = [motion.speed() for phase in self.phases for motion in phase.motions]
        return max(speeds, default=0.0)

    def kinds(self):
        return [phase.kind for phase in self.phases]


def sensor_segments(poses, r):
    """ Концы отрезков сенсоров по позам (x, y, angle), массив (n, 2, 2) """
    poses = np.asarray(poses, dtype=float).reshape(-1, 3)
    if poses.size == 0:
        return np.zeros((0, 2, 2))
    center = poses[:, :2]
    unit = np.stack([np.cos(poses[:, 2]), np.sin(poses[:, 2])], axis=1)
    return np.stack([center - r * unit, center + r * unit], axis=1)


class PlanBuilder:
    """
    Пошаговая сборка плана. Хранит состояние каждого агента
    (радиус центра сенсора, угол, направление обхода). Сенсоры всегда
    направлены по радиусу, кроме линейного финала, где они сохраняют последний угол.
    """

    def __init__(self, strategy, n, r, V_s, V_T, thetas, directions, rho):
        self.plan = TrajectoryPlan(strategy=strategy, n=n, r=r, V_s=V_s)
        self.V_s = V_s
        self.V_T = V_T
        self.theta = np.asarray(thetas, dtype=float)
        self.direction = np.asarray(directions, dtype=float)
        self.rho = float(rho)
        self.position = None

    def _append(self, kind, duration, motions):
        self.plan.phases.append(Phase(kind=kind, duration=float(duration), motions=motions))

    def current_poses(self):
        if self.position is not None:
            return [np.array([x, y, th]) for (x, y), th in zip(self.position, self.theta)]
        return [np.array([*_polar(self.rho, th), th]) for th in self.theta]

    def arc(self, angle, radius=None):
        """ Дуга на угол angle по окружности радиуса центра сенсора """
        radius = self.rho if radius is None else radius
        self.rho = float(radius)
        motions = [ArcMotion(radius, th, d, self.V_s) for th, d in zip(self.theta, self.direction)]
        duration = radius * angle / self.V_s
        self._append(ARC, duration, motions)
        self.theta = self.theta + self.direction * angle
        return duration

    def spiral(self, angle, outward=True):
        motions = [SpiralMotion(self.rho, th, d, self.V_s, self.V_T, outward=outward)
                   for th, d in zip(self.theta, self.direction)]
        duration = motions[0].duration_for_angle(angle)
        self._append(SPIRAL_OUT if outward else SPIRAL_IN, duration, motions)
        self.rho = motions[0].rho(duration)
        self.theta = self.theta + self.direction * angle
        return duration

    def advance(self, rho_to, duration):
        motions = [RadialMotion(th, self.rho, rho_to, duration) for th in self.theta]
        self._append(INWARD_ADVANCE, duration, motions)
        self.rho = float(rho_to)
        return duration

    def switch_direction(self):
        self._append(DIRECTION_SWITCH, 0.0, [Hold(p) for p in self.current_poses()])
        self.direction = -self.direction

    def linear(self, heading, distance, duration):
        """ Параллельный сдвиг всех агентов на distance вдоль heading """
        if self.position is None:
            self.position = [np.array(_polar(self.rho, th)) for th in self.theta]
        speed = distance / duration if duration > 0 else 0.0
        heading = np.asarray(heading, dtype=float)
        motions = [LinearMotion(pos, heading, speed, th) for pos, th in zip(self.position, self.theta)]
        self._append(LINEAR_LEG, duration, motions)
        self.position = [pos + heading * distance for pos in self.position]
        return duration

    @staticmethod
    def pincer_layout(n):
        """ Пары спина к спине: агент 2j против часовой, 2j+1 по часовой, луч пары 4πj/n """
        thetas = np.repeat(4 * np.pi * np.arange(n // 2) / n, 2)
        directions = np.tile([1.0, -1.0], n // 2)
        return thetas, directions

    @staticmethod
    def same_direction_layout(n):
        return 2 * np.pi * np.arange(n) / n, np.ones(n)

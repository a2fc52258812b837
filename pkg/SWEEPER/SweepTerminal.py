import os
import sys
import atexit
import readline

from CommandParser import CommandParser
from UserInterface import UserInterface
from LOGGING import LOGGING
from LOGGING import DummyLogger
from SweepConfig import SweepConfig
from CoreModel import CoreModel
from CircularSame import CircularSame
from Strategies import Strategies
from CompareStudy import (CompareStudy, even_range, COMPARISON_COLUMNS, CRITICAL_COLUMNS, TIME_COLUMNS)
from SweepSimulator import SweepSimulator, ESCAPE, CLEANED
from Exceptions import SweepError, EXIT_OK, EXIT_USAGE, EXIT_ESCAPE


PHASE_COLUMNS = ["index", "kind", "start", "duration"]


class SweepTerminal:
    """
    Основной класс для связи между UserInterface и расчетными модулями.

    Каждая команда возвращает код выхода: 0 - успех, 1 - ошибка использования,
    2 - сценарий неосуществим, 3 - симуляция показала уход уклоняющихся.
    """

    def __init__(self):
        try:
            self.logger_info, self.logger_error = LOGGING.setup_logging()
        except Exception as e:
            UserInterface.show_error(f"LOGGING was not started due to an error: {e}")
            self.logger_info = DummyLogger()
            self.logger_error = DummyLogger()

    def execute_command(self, input_string):
        """
        Выполняет команду, введенную пользователем.

        Args:
            input_string (str | list): Строка команды или уже разделенные аргументы.

        Returns:
            int: Код выхода команды.
        """
        self.logger_info.info(input_string if isinstance(input_string, str) else " ".join(input_string))

        COMMANDS = {
            'critical-velocity': self.critical_velocity,
            'plan': self.plan,
            'simulate': self.simulate,
            'compare': self.compare,
            'plot': self.plot,
        }

        if isinstance(input_string, str):
            command, args = CommandParser.parser_command(input_string)
        else:
            command, args = CommandParser.parse_argv(list(input_string))

        try:
            method = COMMANDS[command]
        except KeyError:
            UserInterface.show_error(f"Unknown command {command}")
            return EXIT_USAGE
        if args is None:
            return EXIT_USAGE
        return method(args)

    def _guarded(self, action, args):
        """ Общая обработка ошибок команд """
        try:
            if args == 'help':
                return EXIT_OK
            return action(args)
        except SweepError as e:
            UserInterface.show_error(f"{type(e).__name__}: {e}")
            UserInterface.stop_animations()
            self.logger_error.error(f"{type(e).__name__}: {e}")
            return e.exit_code
        except Exception as e:
            UserInterface.show_error(
                f"Incorrect use of the command caused the message. Called exception: {e}"
            )
            UserInterface.stop_animations()
            self.logger_error.error(e)
            return EXIT_USAGE

    @staticmethod
    def _emit(text, out):
        """ Текст CSV в файл out или в stdout """
        if out:
            with open(out, "w", encoding="utf-8", newline="") as file:
                file.write(text)
            UserInterface.show_success(f"Written {out}")
        else:
            sys.stdout.write(text)

    @staticmethod
    def _speed(config, strategy):
        if config.vs is not None:
            return config.vs
        return Strategies.critical_velocity(strategy, config.params) + config.dv[0]

    # ---------- команды ----------

    def critical_velocity(self, args):
        return self._guarded(self._critical_velocity, args)

    def _critical_velocity(self, args):
        config = SweepConfig.resolve(args)
        if args.strategy:
            params = CoreModel.validate_scenario(config.params)
            value = Strategies.critical_velocity(args.strategy, params)
            UserInterface.show_message(CompareStudy.format_value(value))
            if args.strategy == CircularSame.NAME:
                exact = CircularSame.critical_velocity(params).exact
                UserInterface.show_message(f"arcsine exact: {CompareStudy.format_value(exact)}")
            return EXIT_OK

        stop = UserInterface.show_loading_message()
        rows = CompareStudy.study_critical_velocities(config.params, even_range(2, config.n_max),
                                                     workers=config.workers)
        stop()
        self._emit(CompareStudy.to_csv_text(rows, CRITICAL_COLUMNS), config.out)
        return EXIT_OK

    def plan(self, args):
        return self._guarded(self._plan, args)

    def _plan(self, args):
        config = SweepConfig.resolve(args)
        params = CoreModel.validate_scenario(config.params)
        V_s = self._speed(config, config.strategy)
        plan = Strategies.trajectory_plan(config.strategy, params, V_s)
        row = Strategies.time_row(config.strategy, params, V_s, config.radius_mode)

        starts = plan.phase_starts()
        phases = [{"index": i, "kind": phase.kind, "start": float(start), "duration": phase.duration}
                  for i, (phase, start) in enumerate(zip(plan.phases, starts))]
        self._emit(CompareStudy.to_csv_text(phases, PHASE_COLUMNS), config.out)

        fmt = CompareStudy.format_value
        UserInterface.show_message([
            {'text': f"{config.strategy} ", 'color': 'bright_yellow'},
            {'text': f"V_s={fmt(V_s)} N={row.N} T_in={fmt(row.T_in)} T_traverse={fmt(row.T_traverse)} "
                     f"T_endgame={fmt(row.T_endgame)} T_total={fmt(row.T_total)}", 'clear': ''},
        ], stream=sys.stderr)
        return EXIT_OK

    def simulate(self, args):
        return self._guarded(self._simulate, args)

    def _simulate(self, args):
        config = SweepConfig.resolve(args)
        params = CoreModel.validate_scenario(config.params)
        V_s = self._speed(config, config.strategy)
        plan = Strategies.trajectory_plan(config.strategy, params, V_s)

        cell = config.cell_size
        dt = config.dt if config.dt is not None else SweepSimulator.default_dt(cell, V_s, params.V_T, plan)
        world = SweepSimulator.init_world(params, cell, dt, plan=plan)
        update, stop = UserInterface.show_progress_message()
        outcome = SweepSimulator.run(plan, world, wall_budget=config.wall_budget,
                                     trace=config.trace is not None, progress=update)
        stop()

        if config.trace:
            frame = SweepSimulator.trace_frame(outcome, params.n)
            text = CompareStudy.to_csv_text(frame.to_dict("records"), list(frame.columns))
            self._emit(text, config.trace)

        fmt = CompareStudy.format_value
        analytic = Strategies.total_time(config.strategy, params, V_s, config.radius_mode)
        message = (f"{outcome.kind} t={fmt(outcome.time)} steps={outcome.steps} "
                   f"plan={fmt(plan.total_duration)} analytic={fmt(analytic)}")
        if outcome.kind == CLEANED:
            UserInterface.show_success(message)
            return EXIT_OK
        UserInterface.show_error(message)
        return EXIT_ESCAPE if outcome.kind == ESCAPE else EXIT_USAGE

    def compare(self, args):
        return self._guarded(self._compare, args)

    def _study(self, config, args):
        """
        Returns:
            tuple: (строки, колонки, вид графика)
        """
        n_values = even_range(2, config.n_max)
        family = config.family
        if family is None and getattr(args, "strategy", None):
            rows = CompareStudy.study_total_times(config.params, n_values, config.dv, args.strategy,
                                                  mode=config.radius_mode, workers=config.workers)
            return rows, TIME_COLUMNS, "times"
        family = family or "circular"
        strategy_a, strategy_b = Strategies.FAMILIES[family]
        rows = CompareStudy.study_compare(config.params, n_values, config.dv, strategy_a, strategy_b,
                                          family=family, mode=config.radius_mode, workers=config.workers)
        return rows, COMPARISON_COLUMNS, "comparison"

    def _compare(self, args):
        config = SweepConfig.resolve(args)
        CoreModel.validate_scenario(config.params)
        stop = UserInterface.show_loading_message()
        rows, columns, _ = self._study(config, args)
        stop()
        self._emit(CompareStudy.to_csv_text(rows, columns), config.out)
        return EXIT_OK

    def plot(self, args):
        return self._guarded(self._plot, args)

    def _plot(self, args):
        config = SweepConfig.resolve(args)
        CoreModel.validate_scenario(config.params)
        stop = UserInterface.show_loading_message()
        if config.family is not None:
            rows, columns, kind = self._study(config, args)
        else:
            rows = CompareStudy.study_critical_velocities(config.params, even_range(2, config.n_max),
                                                         workers=config.workers)
            columns, kind = CRITICAL_COLUMNS, "critical"
        stop()

        out = config.out or "sweep.svg"
        csv_path = os.path.splitext(out)[0] + ".csv"
        text = CompareStudy.write_csv(rows, columns, csv_path)
        CompareStudy.plot_svg(text, kind, out)
        UserInterface.show_success(f"Written {out} and {csv_path}")
        return EXIT_OK


HISTORY_FILE = os.path.join(os.path.expanduser("~"), ".sweep_history")


def load_history():
    try:
        readline.read_history_file(HISTORY_FILE)
    except (FileNotFoundError, OSError):
        pass


# Сохранение истории команд в файл
def save_history():
    readline.write_history_file(HISTORY_FILE)


# Настройка истории команд и автодополнения
def setup_history():
    readline.set_history_length(1000)
    load_history()
    atexit.register(save_history)
    readline.set_completer_delims(" ")
    readline.set_completer(CommandParser.completer)
    readline.parse_and_bind("tab: complete")


def cli_dispatch(argv):
    """ Одна команда из командной строки, возвращает код выхода """
    terminal = SweepTerminal()
    if not argv:
        UserInterface.show_error("Usage: SweepTerminal.py <critical-velocity|plan|simulate|compare|plot> [flags]")
        return EXIT_USAGE
    return terminal.execute_command(list(argv))


if __name__ == '__main__':
    if len(sys.argv) > 1:
        sys.exit(cli_dispatch(sys.argv[1:]))

    setup_history()

    terminal = SweepTerminal()
    while True:
        try:
            input_string = input('sweep $ ')
        except EOFError:
            break

        if input_string == "exit":
            break
        if input_string.strip():
            terminal.execute_command(input_string)

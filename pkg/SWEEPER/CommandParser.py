import argparse
import readline
import shlex

from UserInterface import UserInterface


STRATEGIES = ("circular-pincer", "spiral-pincer", "circular-same", "spiral-same")
FAMILIES = ("circular", "spiral")
RADIUS_MODES = ("verbatim", "band")


class CommandParser:
    """
    Класс для разбора команд, введенных пользователем или переданных в командной строке.

    Все флаги по умолчанию равны None: недостающие значения затем берутся
    из окружения SWEEP_* или из значений по умолчанию (SweepConfig).
    """
    # флаги для автодополнения в интерактивном режиме
    SCENARIO_FLAGS = ['--n', '--r', '--R0', '--vt', '--dv', '--radius-mode', '--workers']
    COMMAND_FLAGS = {
        'critical-velocity': ['--strategy', '--n-max', '--out'],
        'plan': ['--strategy', '--vs', '--out'],
        'simulate': ['--strategy', '--vs', '--cell', '--dt', '--wall-budget', '--trace'],
        'compare': ['--family', '--strategy', '--n-max', '--out'],
        'plot': ['--family', '--n-max', '--out'],
    }
    FLAG_VALUES = {
        '--strategy': STRATEGIES,
        '--family': FAMILIES,
        '--radius-mode': RADIUS_MODES,
    }

    @staticmethod
    def candidates(line, text):
        """
        Варианты дополнения для последнего слова строки.

        Args:
            line (str): Вся введенная строка.
            text (str): Дополняемое слово.

        Returns:
            list: Подходящие команды, флаги или значения флага.
        """
        words = line.split()
        if line.endswith(' '):
            words.append('')
        if len(words) <= 1:
            return [c for c in list(CommandParser.COMMAND_FLAGS) + ['exit'] if c.startswith(text)]

        previous = words[-2]
        if previous in CommandParser.FLAG_VALUES:
            return [v for v in CommandParser.FLAG_VALUES[previous] if v.startswith(text)]
        flags = CommandParser.COMMAND_FLAGS.get(words[0], []) + CommandParser.SCENARIO_FLAGS
        return [f for f in flags + ['--help'] if f.startswith(text)]

    @staticmethod
    def completer(text, state):
        """ Комплитер для readline """
        options = CommandParser.candidates(readline.get_line_buffer(), text)
        return options[state] if state < len(options) else None

    @staticmethod
    def parser_command(input_string):
        """
        Разбирает строку команды и возвращает команду и её аргументы.

        Args:
            input_string (str): Строка команды, введенная пользователем.

        Returns:
            tuple: (команда, Namespace | "help" | None) или (None, None), если строка пустая.
        """
        try:
            parts = shlex.split(input_string)  # Используем shlex для разбора строки
        except ValueError:
            UserInterface.show_error("No closing quotation")
            return None, None
        return CommandParser.parse_argv(parts)

    @staticmethod
    def parse_argv(parts):
        # словарь с командами и их парсерами
        commands = {
            'critical-velocity': CommandParser.parse_args_critical_velocity,
            'plan': CommandParser.parse_args_plan,
            'simulate': CommandParser.parse_args_simulate,
            'compare': CommandParser.parse_args_compare,
            'plot': CommandParser.parse_args_plot,
        }
        if not parts:
            return None, None

        command = parts[0]
        args = parts[1:]

        if command in commands:
            return command, commands[command](args)
        return command, None

    @staticmethod
    def _run(parser, args):
        """
        Общая часть всех парсеров.

        Returns:
            Namespace: Разобранные аргументы, "help" при запросе справки
                или None, если аргументы неверны.
        """
        try:
            # Проверка на наличие --help или -h
            if '--help' in args or '-h' in args:
                parser.print_help()
                return "help"

            return parser.parse_args(args)
        except SystemExit:
            # Перехват SystemExit для предотвращения завершения программы
            # argparse уже напечатал сообщение об ошибке
            return None

        except argparse.ArgumentError as e:
            UserInterface.show_error(str(e))
            return None

    @staticmethod
    def _scenario_options(parser):
        parser.add_argument('--n', type=int, default=None, help="Swarm size (even)")
        parser.add_argument('--r', type=float, default=None, help="Half length of the linear sensor")
        parser.add_argument('--R0', type=float, default=None, help="Initial radius of the evader region")
        parser.add_argument('--vt', type=float, default=None, help="Maximal evader speed V_T")
        parser.add_argument('--dv', type=str, default=None,
                            help="Comma separated speed margins over the critical velocity "
                                 "(use --dv=-5,10 for negative values)")
        parser.add_argument('--radius-mode', choices=RADIUS_MODES, default=None,
                            help="Spiral same-direction radius bookkeeping for tables (plans always use band)")
        parser.add_argument('--workers', type=int, default=None, help="Parallel study cells")

    @staticmethod
    def parse_args_critical_velocity(args):
        parser = argparse.ArgumentParser(prog="critical-velocity",
                                         description="Critical velocity of one strategy, or the table for n = 2..n-max.")
        CommandParser._scenario_options(parser)
        parser.add_argument('--strategy', choices=STRATEGIES, default=None, help="Print only this strategy")
        parser.add_argument('--n-max', type=int, default=None, help="Largest swarm size of the table")
        parser.add_argument('--out', default=None, help="CSV file for the table")
        return CommandParser._run(parser, args)

    @staticmethod
    def parse_args_plan(args):
        parser = argparse.ArgumentParser(prog="plan", description="Trajectory plan and time breakdown of a strategy.")
        CommandParser._scenario_options(parser)
        parser.add_argument('--strategy', choices=STRATEGIES, default=None)
        parser.add_argument('--vs', type=float, default=None, help="Sweeper speed (overrides V_c + dV)")
        parser.add_argument('--out', default=None, help="CSV file for the phase table")
        return CommandParser._run(parser, args)

    @staticmethod
    def parse_args_simulate(args):
        parser = argparse.ArgumentParser(prog="simulate", description="Run a strategy plan on the evader grid.")
        CommandParser._scenario_options(parser)
        parser.add_argument('--strategy', choices=STRATEGIES, default=None)
        parser.add_argument('--vs', type=float, default=None, help="Sweeper speed (overrides V_c + dV)")
        parser.add_argument('--cell', type=float, default=None, help="Grid resolution (default R0/200)")
        parser.add_argument('--dt', type=float, default=None, help="Time step (default from cell and speeds)")
        parser.add_argument('--wall-budget', type=float, default=None, help="Wall clock budget in seconds")
        parser.add_argument('--trace', default=None, help="CSV file for the per-step trace")
        return CommandParser._run(parser, args)

    @staticmethod
    def parse_args_compare(args):
        parser = argparse.ArgumentParser(prog="compare",
                                         description="Fair comparison study of a strategy family, "
                                                     "or the time study of one strategy.")
        CommandParser._scenario_options(parser)
        parser.add_argument('--family', choices=FAMILIES, default=None)
        parser.add_argument('--strategy', choices=STRATEGIES, default=None)
        parser.add_argument('--n-max', type=int, default=None)
        parser.add_argument('--out', default=None, help="CSV file for the table")
        return CommandParser._run(parser, args)

    @staticmethod
    def parse_args_plot(args):
        parser = argparse.ArgumentParser(prog="plot",
                                         description="SVG plot of the comparison (--family) or critical velocity table.")
        CommandParser._scenario_options(parser)
        parser.add_argument('--family', choices=FAMILIES, default=None)
        parser.add_argument('--n-max', type=int, default=None)
        parser.add_argument('--out', default="sweep.svg", help="SVG file, a sibling .csv is written too")
        return CommandParser._run(parser, args)

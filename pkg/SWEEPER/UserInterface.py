import sys
import threading


_animations = []


class UserInterface:
    """
    Вывод терминала: сообщения, ошибки и анимации расчетов.

    Сообщение - строка или список сегментов [{'text': ..., 'color': ..., 'style': ..., 'clear': ...}].
    clear - префикс сегмента, по умолчанию "\\r"; "" чтобы продолжить строку.

    Цвета и анимации включаются только в терминале. В файл или конвейер
    уходит чистый текст, поэтому CSV в stdout не портится.
    """

    COLORS = {
        'reset': "\033[0m",
        'red': "\033[31m",
        'green': "\033[32m",
        'yellow': "\033[33m",
        'cyan': "\033[36m",
        'bright_black': "\033[90m",
        'bright_yellow': "\033[93m",
    }

    STYLES = {
        'bold': "\033[1m",
        'underline': "\033[4m"
    }

    SPINNER = "⠋⠙⠹⠸⠼⠴⠦⠧⠇⠏"
    BAR_WIDTH = 40

    @staticmethod
    def interactive():
        return sys.stdout.isatty()

    @staticmethod
    def _render(message, color=None):
        if isinstance(message, list):
            message = UserInterface.format_message(message)
        if color and UserInterface.interactive():
            message = UserInterface.COLORS[color] + message + UserInterface.COLORS['reset']
        return message

    @staticmethod
    def _animate(frame, period):
        """
        Запускает поток, который перерисовывает строку frame(tick) раз в period секунд.

        Returns:
            function: остановка анимации с очисткой строки
        """
        event = threading.Event()
        _animations[:] = [e for e in _animations if not e.is_set()]
        _animations.append(event)
        if not UserInterface.interactive():
            return lambda: UserInterface._finish(event)

        def loop():
            tick = 0
            while not event.is_set():
                sys.stdout.write("\r" + frame(tick))
                sys.stdout.flush()
                tick += 1
                event.wait(period)
            sys.stdout.write("\r" + " " * (UserInterface.BAR_WIDTH + 20) + "\r")
            sys.stdout.flush()

        worker = threading.Thread(target=loop, daemon=True)
        worker.start()

        def stop():
            UserInterface._finish(event)
            worker.join()
        return stop

    @staticmethod
    def _finish(event):
        event.set()
        if event in _animations:
            _animations.remove(event)

    @staticmethod
    def show_loading_message(label="Computing"):
        spinner = UserInterface.SPINNER
        return UserInterface._animate(lambda tick: f"{label} {spinner[tick % len(spinner)]}", 0.16)

    @staticmethod
    def show_progress_message():
        """
        Прогресс-бар очистки области.

        Returns:
            tuple: (update(percent), stop())
        """
        state = {"percent": 0.0}

        def update(percent):
            state["percent"] = min(max(percent, 0.0), 100.0)

        def frame(_):
            filled = int(UserInterface.BAR_WIDTH * state["percent"] // 100)
            bar = '=' * filled + '-' * (UserInterface.BAR_WIDTH - filled)
            return f"|{bar}| {state['percent']:.2f}% cleared"

        return update, UserInterface._animate(frame, 0.5)

    @staticmethod
    def stop_animations():
        """ Аварийная остановка всех анимаций после ошибки """
        while _animations:
            _animations.pop().set()

    @staticmethod
    def format_message(segments):
        if not UserInterface.interactive():
            return "".join(segment.get('text', '') for segment in segments)
        parts = []
        for segment in segments:
            color = UserInterface.COLORS.get(segment.get('color', 'reset'), '')
            style = UserInterface.STYLES.get(segment.get('style', ''), '')
            parts.append(f"{segment.get('clear', chr(13))}{color}{style}{segment.get('text', '')}"
                         f"{UserInterface.COLORS['reset']}")
        return "".join(parts)

    @staticmethod
    def show_message(message, end="\n", stream=None):
        (stream or sys.stdout).write(UserInterface._render(message) + end)

    @staticmethod
    def show_error(error_message):
        sys.stderr.write(UserInterface._render(error_message, 'red') + '\n')

    @staticmethod
    def show_success(success_message):
        sys.stdout.write(UserInterface._render(success_message, 'green') + '\n')

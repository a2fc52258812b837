import logging
from logging.handlers import RotatingFileHandler
import os
from dotenv import load_dotenv


DEFAULT_LOGGING_PATH = "./logs"


class DummyLogger:
    def info(self, msg, *args, **kwargs):
        pass

    def error(self, msg, *args, **kwargs):
        pass


class LOGGING():
    @staticmethod
    def create_log_directory():
        load_dotenv()
        log_dir = os.getenv("SWEEP_LOGGING_PATH") or DEFAULT_LOGGING_PATH
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)
        return log_dir

    @staticmethod
    def _attach(logger, path, fmt):
        # один файловый обработчик на логгер; при смене SWEEP_LOGGING_PATH старый заменяется
        target = os.path.abspath(path)
        for h in list(logger.handlers):
            if isinstance(h, RotatingFileHandler):
                if h.baseFilename == target:
                    return
                logger.removeHandler(h)
                h.close()
        handler = RotatingFileHandler(target, maxBytes=10 * 1024 * 1024, backupCount=5)
        handler.setFormatter(logging.Formatter(fmt))
        logger.addHandler(handler)

    @staticmethod
    def setup_logging():
        log_dir = LOGGING.create_log_directory()

        # Логгер для расчетов: найденные скорости, раунды решателя, итоги симуляции
        logger_info = logging.getLogger('info_logger')
        logger_info.setLevel(logging.INFO)
        LOGGING._attach(logger_info, f"{log_dir}/info.log", '%(asctime)s - %(levelname)s - %(message)s')

        # Логгер для ошибок и расхождений формул
        logger_error = logging.getLogger('error_logger')
        logger_error.setLevel(logging.ERROR)
        LOGGING._attach(logger_error, f"{log_dir}/error.log",
                        '%(asctime)s - %(levelname)s - %(module)s.%(funcName)s - %(message)s')

        return logger_info, logger_error

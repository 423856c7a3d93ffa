import os
import copy
import logging
import threading
import multiprocessing
import logging.config

LOG_OVERRIDE = os.environ.get("NOMUNI_LOG_OVERRIDE", None)
DEFAULT_LOG_LEVEL = "WARNING"
MAX_LOG_FILE_SIZE = 20 * 1024 * 1024  # 20m
MAX_LOG_FILES = 2


class LowPassFilter:
    def __init__(self, level):
        self.level = level

    def filter(self, log):
        return log.levelno <= self.level


class HighPassFilter(LowPassFilter):
    def filter(self, log):
        return log.levelno >= self.level


class WorkerLogFormatter(logging.Formatter):
    worker_fmt = logging.Formatter(
        "%(asctime)s [%(levelname)s] [%(workerName)s] %(name)s: %(message)s"
    )
    default_fmt = logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s")

    def format(self, record):
        if getattr(record, "workerName", ""):
            return self.worker_fmt.format(record)
        return self.default_fmt.format(record)


def _worker_name():
    process = multiprocessing.current_process()
    if process.name == "MainProcess":
        thread = threading.current_thread()
        return "" if thread is threading.main_thread() else thread.name
    return process.name


class ThreadLogger:
    def __init__(self, name):
        self.logger = logging.getLogger(name)

    def log(self, level, msg, *args, extra=None, **kwargs):
        if extra is None:
            extra = {}
        extra["workerName"] = _worker_name()
        self.logger.log(level, msg, *args, extra=extra, **kwargs)

    def isEnabledFor(self, level):
        return self.logger.isEnabledFor(level)

    def debug(self, msg, *args, **kwargs):
        self.log(logging.DEBUG, msg, *args, **kwargs)

    def info(self, msg, *args, **kwargs):
        self.log(logging.INFO, msg, *args, **kwargs)

    def warning(self, msg, *args, **kwargs):
        self.log(logging.WARNING, msg, *args, **kwargs)

    def error(self, msg, *args, **kwargs):
        self.log(logging.ERROR, msg, *args, **kwargs)

    def critical(self, msg, *args, **kwargs):
        self.log(logging.CRITICAL, msg, *args, **kwargs)

    def exception(self, msg, *args, **kwargs):
        kwargs.setdefault("exc_info", 1)
        self.log(logging.ERROR, msg, *args, **kwargs)


def getLogger(name):
    return ThreadLogger(name)


logger = getLogger("nomuni")


DEFAULT_LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "filters": {
        "infofilter": {"()": LowPassFilter, "level": logging.INFO},
        "warnfilter": {"()": HighPassFilter, "level": logging.WARNING},
    },
    "formatters": {
        "standard": {"()": WorkerLogFormatter},
        "brief": {"format": "%(levelname)s: %(message)s"},
    },
    "handlers": {
        # stdout carries solver results, so both handlers write to stderr
        "console": {
            "level": LOG_OVERRIDE or "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "stream": "ext://sys.stderr",
            "filters": ["infofilter"],
        },
        "console_err": {
            "level": "WARNING",
            "class": "logging.StreamHandler",
            "formatter": "brief",
            "stream": "ext://sys.stderr",
            "filters": ["warnfilter"],
        },
    },
    "loggers": {
        "sentry_sdk": {
            "handlers": ["console_err"],
            "level": LOG_OVERRIDE or os.environ.get("NOMUNI_LOG", "") or DEFAULT_LOG_LEVEL,
            "propagate": False,
        },
        "nomuni": {
            "handlers": ["console", "console_err"],
            "level": LOG_OVERRIDE or os.environ.get("NOMUNI_LOG", "") or DEFAULT_LOG_LEVEL,
            "propagate": False,
        },
    },
}


def logging_config(level=None, log_file=""):
    config = copy.deepcopy(DEFAULT_LOGGING_CONFIG)
    if level is not None and not LOG_OVERRIDE:
        config["loggers"]["nomuni"]["level"] = level
    if log_file:
        config["handlers"]["logfile"] = {
            "level": LOG_OVERRIDE or "DEBUG",
            "class": "logging.handlers.RotatingFileHandler",
            "formatter": "standard",
            "filename": str(log_file),
            "mode": "a",
            "maxBytes": MAX_LOG_FILE_SIZE,
            "backupCount": MAX_LOG_FILES,
        }
        for name in config["loggers"]:
            config["loggers"][name]["handlers"].append("logfile")
    return config


def setup_logging(level=None, log_file=""):
    logging.config.dictConfig(logging_config(level, log_file))

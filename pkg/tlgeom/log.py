""" Thin wrappers around builtin 'logging' module, shared by every `tlgeom`
module and configured once by the command line front end.

1. Create logger and (optionally) set it as a default `tlgeom` logger.
    Note:
        'Default' logger means that (once initialized), any `tlgeom` log
        functions, such as :func:`info()` and :func:`warning()` will log to
        this *default* logger. Until a default logger is set, log functions
        fall back to the package logger ``logging.getLogger("tlgeom")``, which
        has no handlers of its own, so library code never fails to log.
    Example:
        >>> logger = tlgeom.log.create_logger()
        >>> tlgeom.log.add_console_hdlr(logger)
        >>> tlgeom.log.info("Lifting algebra.")

2. Use `tlgeom.log.add_*()` functions to add console (stderr) and file
    handlers to any ``logging.Logger`` instance.

Note:
    Reports are written to stdout; all log records go to stderr or a log file.
"""
import logging
import pathlib
import sys
from typing import List, Optional, Tuple, Union

PACKAGE_LOGGER_NAME = "tlgeom"
DEFAULT_LOG_FILE_EXT = ".log"

# https://docs.python.org/3/library/logging.html#logrecord-attributes
DEFAULT_FMT = "%(name)-8s %(asctime)s.%(msecs)03d %(levelname)+8s: %(message)s"
DEFAULT_FMT_TIME = "%H:%M:%S"

# private, do not modify
_default_logger: Optional[logging.Logger] = None

T_LOGGER = Union[logging.Logger, str]


def create_logger(
    name: str = PACKAGE_LOGGER_NAME, set_as_default: bool = True, level: Optional[int] = logging.DEBUG
) -> logging.Logger:
    """Create new logger instance with the given 'name' and optionally
    set it as a default logger whenever `tlgeom.log.*` log functions are invoked.

    Args:
        name: name of the new logger instance, package logger by default.
        set_as_default: If True, created logger instance will be set as a
            default logger whenever `tlgeom.log.*` log functions are invoked.
        level: log level for this specific logger. If None, level is not set.
    """
    global _default_logger
    if set_as_default:
        if _default_logger is not None:
            err_msg = f"Unable to create new default logger instance, default already set: {_default_logger.name}"
            raise Exception(err_msg)

    logger = logging.getLogger(name)
    if level:
        logger.setLevel(level)

    if set_as_default:
        _default_logger = logger

    return logger


def _get_logger(logger: T_LOGGER) -> logging.Logger:
    """Allow user to specify logger by passing exact instance or logger name."""
    if isinstance(logger, str):
        if logger in logging.Logger.manager.loggerDict:
            return logging.getLogger(logger)
        else:
            err_msg = f"Logger with name '{logger}' does not exist. "
            err_msg += "Use `tlgeom.log.create_logger()` or manually create new `logging.Logger` instance."
            raise ValueError(err_msg)
    else:
        return logger


def _formatter(fmt: Optional[logging.Formatter]) -> logging.Formatter:
    if fmt is None:
        fmt = logging.Formatter(DEFAULT_FMT, datefmt=DEFAULT_FMT_TIME)

    return fmt


def add_console_hdlr(
    logger: T_LOGGER, fmt: Optional[logging.Formatter] = None, level: int = logging.DEBUG
) -> logging.StreamHandler:
    """Add console handler (``stderr``) to logger instance.

    Args:
        logger: logger instance or logger name.
        fmt: Optional custom formatter for created handler. By default,
            ``DEFAULT_FMT`` and ``DEFAULT_FMT_TIME`` are used.
        level: set log level for this specific handler.

    Returns:
        Created console (stream) handler object.
    """
    logger = _get_logger(logger)

    hdlr = logging.StreamHandler(sys.stderr)
    hdlr.setLevel(level)
    hdlr.setFormatter(_formatter(fmt))

    logger.addHandler(hdlr)

    return hdlr


def add_file_hdlr(
    logger: T_LOGGER,
    file_path: Union[str, pathlib.Path],
    fmt: Optional[logging.Formatter] = None,
    level: int = logging.DEBUG,
    mode: str = "w",
) -> Tuple[logging.FileHandler, pathlib.Path]:
    """Add file handler to logger instance.

    Args:
        logger: logger instance or logger name.
        file_path: path of a log file. If there is no file extension, default
            ``DEFAULT_LOG_FILE_EXT`` is appended. Missing parent directories
            are created.
        fmt: Optional custom formatter for created handler.
        level: Log level for this specific handler.
        mode: file open mode (`"w`", "a", ... See logging docs.).

    Returns:
        A tuple: (created file handler, file path).
    """
    logger = _get_logger(logger)

    file_path = pathlib.Path(file_path)
    if file_path.suffix == "":
        file_path = file_path.with_suffix(DEFAULT_LOG_FILE_EXT)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    hdlr = logging.FileHandler(file_path, mode=mode, encoding="utf-8")
    hdlr.setLevel(level)
    hdlr.setFormatter(_formatter(fmt))

    logger.addHandler(hdlr)

    return (hdlr, file_path)


def get_log_file_paths(logger: T_LOGGER) -> List[pathlib.Path]:
    """Return log file paths of `logging.FileHandler(s)` of a given logger instance."""
    logger = _get_logger(logger)

    return [pathlib.Path(hdlr.baseFilename) for hdlr in logger.handlers if isinstance(hdlr, logging.FileHandler)]


def get_default_logger() -> Optional[logging.Logger]:
    """Get default logger instance object (if set)."""
    return _default_logger


def set_default_logger(logger: Optional[logging.Logger]):
    """Set (or with ``None``, reset) default logger instance."""
    global _default_logger

    _default_logger = logger


def remove_handlers(logger: T_LOGGER):
    """Close and detach all handlers of a given logger."""
    logger = _get_logger(logger)
    for hdlr in list(logger.handlers):
        hdlr.close()
        logger.removeHandler(hdlr)


def _determine_logger(logger: Optional[T_LOGGER] = None) -> logging.Logger:
    """Determine logger instance when `tlgeom.log.debug/info/...` functions are
    used: given logger, else default logger, else the package logger.
    """
    if logger is not None:
        return _get_logger(logger)
    if _default_logger is not None:
        return _default_logger

    return logging.getLogger(PACKAGE_LOGGER_NAME)


def debug(msg: str, logger: Optional[T_LOGGER] = None, *args, **kwargs):
    """Log to a given or default logger with 'DEBUG' level.

    Args:
        msg: message to log.
        logger: logger instance or logger name. If not set, default logger
            is used (as set by :func:`create_logger()`).
    """
    _determine_logger(logger).debug(msg, *args, **kwargs)


def info(msg: str, logger: Optional[T_LOGGER] = None, *args, **kwargs):
    """Log to a given or default logger with 'INFO' level."""
    _determine_logger(logger).info(msg, *args, **kwargs)


def warning(msg: str, logger: Optional[T_LOGGER] = None, *args, **kwargs):
    """Log to a given or default logger with 'WARNING' level."""
    _determine_logger(logger).warning(msg, *args, **kwargs)


def error(msg: str, logger: Optional[T_LOGGER] = None, *args, **kwargs):
    """Log to a given or default logger with 'ERROR' level."""
    _determine_logger(logger).error(msg, *args, **kwargs)


def error_with_traceback(msg: str, logger: Optional[T_LOGGER] = None, *args, **kwargs):
    """Log with 'ERROR' level and append exception info traceback at the
    end (if available).
    """
    _, _, tb = sys.exc_info()
    if tb is not None:
        kwargs["exc_info"] = True
    error(msg, logger, *args, **kwargs)

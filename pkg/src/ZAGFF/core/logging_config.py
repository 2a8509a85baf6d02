"""
Centralized logging configuration for the toolkit.

Every module asks `get_logger(__name__)` for its logger. All toolkit loggers
share one stderr console handler and, when ``ZAGFF_LOG_TO_FILE`` is set, one
rotating file handler, so stdout stays free for the CLI's JSON output.

Module Input:
    - Logger name strings from calling modules
    - Level and file options from settings, or a CLI ``--log-level``

Module Output:
    - Configured logger instances
    - Pipe-delimited records on stderr (and in logs/zagff.log when enabled)
"""

from __future__ import annotations

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from .exceptions import ValidationError
from .settings import settings

# "2024-01-15 10:30:45 | INFO     | ZAGFF.services.greens.torus:zero_average_green:88 | Built table"
LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def resolve_level(level: int | str) -> int:
    """
    Numeric logging level from a name or number.

    Raises:
        ValidationError: If the name is not a standard level
    """
    if isinstance(level, int):
        return level
    try:
        return _LEVELS[level.strip().upper()]
    except KeyError:
        raise ValidationError(
            f"Unknown log level: {level!r}",
            details={"level": level, "allowed": sorted(_LEVELS, key=_LEVELS.get)},
        )


class LoggerConfig:
    """
    Handler set and registry of toolkit loggers.

    Attributes:
        level (int): Current minimum level
        log_path (Optional[Path]): Rotating log file, None when file logging is off
    """

    def __init__(
        self,
        level: int | str = logging.INFO,
        log_dir: str | Path = "logs",
        log_file: str = "zagff.log",
        log_to_file: bool = False,
        max_bytes: int = 10_485_760,  # 10MB
        backup_count: int = 5,
    ):
        self.level = resolve_level(level)
        self.log_path: Optional[Path] = Path(log_dir) / log_file if log_to_file else None
        self.max_bytes = max_bytes
        self.backup_count = backup_count
        self._handlers: list[logging.Handler] = []
        self._names: set[str] = set()

    def handlers(self) -> list[logging.Handler]:
        """Shared handlers, created on first use."""
        if not self._handlers:
            formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
            console = logging.StreamHandler(sys.stderr)
            self._handlers.append(console)
            if self.log_path is not None:
                self.log_path.parent.mkdir(parents=True, exist_ok=True)
                self._handlers.append(
                    RotatingFileHandler(self.log_path, maxBytes=self.max_bytes, backupCount=self.backup_count)
                )
            for handler in self._handlers:
                handler.setLevel(self.level)
                handler.setFormatter(formatter)
        return self._handlers

    def get_logger(self, name: str) -> logging.Logger:
        logger = logging.getLogger(name)
        if name not in self._names:
            logger.setLevel(self.level)
            logger.propagate = False
            for handler in self.handlers():
                if handler not in logger.handlers:
                    logger.addHandler(handler)
            self._names.add(name)
        return logger

    def set_level(self, level: int | str) -> None:
        self.level = resolve_level(level)
        for handler in self._handlers:
            handler.setLevel(self.level)
        for name in self._names:
            logging.getLogger(name).setLevel(self.level)


_default_config = LoggerConfig(
    level=settings.log_level,
    log_dir=settings.log_dir,
    log_file=settings.log_file,
    log_to_file=settings.log_to_file,
)


def get_logger(name: str) -> logging.Logger:
    """
    Logger for a toolkit module.

    Example:
        logger = get_logger(__name__)
        logger.info("Green table built: n=%d d=%d", 8, 3)
    """
    return _default_config.get_logger(name)


def set_log_level(level: int | str) -> None:
    """Adjust every toolkit logger, e.g. from the CLI ``--log-level`` flag."""
    _default_config.set_level(level)

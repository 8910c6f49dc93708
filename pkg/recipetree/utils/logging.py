import logging
import sys
import threading
from datetime import datetime, timezone
from typing import Union

from recipetree.core.hashing import StateHash
from recipetree.models.progress_event import ProgressEvent

PACKAGE_LOGGER = "recipetree"
PROGRESS_LOGGER = "recipetree.progress"
LOG_FORMAT = "%(asctime)s [%(name)s] [%(levelname)s] %(message)s"


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever `sys.stderr` is at emit time, so redirected streams (e.g. under a test runner) work."""

    def __init__(self):
        super().__init__(sys.stderr)

    def emit(self, record: logging.LogRecord):
        self.stream = sys.stderr
        super().emit(record)


def _is_not_progress(record: logging.LogRecord) -> bool:
    return not record.name.startswith(PROGRESS_LOGGER)


def setup_logging(log_level: Union[str, int] = logging.WARNING) -> logging.Logger:
    """
    Configure the package logger. Calling it again only changes the level.

    Progress lines are left to their own handler so they are not printed twice.
    """
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    package_logger.setLevel(log_level.upper() if isinstance(log_level, str) else log_level)
    if not any(getattr(handler, "_recipetree", False) for handler in package_logger.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler.addFilter(_is_not_progress)
        handler._recipetree = True
        package_logger.addHandler(handler)
    return package_logger


class ProgressLog:
    """
    Progress lines of a run, one per event: `<ISO-8601 UTC time> <hash8> <EXEC|CACHE|FUNC|FAIL> <name>`.

    Lines go to stderr through the `recipetree.progress` logger at INFO. The logger still propagates, so
    handlers installed on the root logger (such as pytest's caplog) see every line.
    """

    _lock = threading.Lock()

    def __init__(self, logger_name: str = PROGRESS_LOGGER):
        self.logger = logging.getLogger(logger_name)
        with ProgressLog._lock:
            if not self.logger.handlers:
                handler = _StderrHandler()
                handler.setFormatter(logging.Formatter("%(message)s"))
                self.logger.addHandler(handler)
                self.logger.setLevel(logging.INFO)

    def record(self, state_hash: StateHash, event: ProgressEvent, name: str):
        timestamp = datetime.now(timezone.utc).isoformat(timespec="milliseconds")
        self.logger.info(f"{timestamp} {state_hash.short} {event.value} {name}")

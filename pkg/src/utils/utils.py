#################################################################
# Shared utilities: logging bootstrap, exceptions, small helpers
#################################################################

import datetime
import logging
import math

from config.config import Config

logger = logging.getLogger(__name__)

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def init_logging():
    """Initialize console + file logging exactly once with absolute path.
    Ensures all modules inheriting from root get the file handler.
    """
    root_logger = logging.getLogger()
    if not root_logger.handlers:  # Only configure if nothing configured yet
        logging.basicConfig(level=Config.LOG_LEVEL, format=_FORMAT)
    try:
        log_dir = Config.LOG_DIR
        log_dir.mkdir(parents=True, exist_ok=True)
        datetime_now = datetime.datetime.now().strftime('%Y%m%d_%H%M%S')
        logfile = log_dir / f'cotex_{datetime_now}.log'
        if not any(isinstance(h, logging.FileHandler) and getattr(h, 'baseFilename', '') == str(logfile) for h in root_logger.handlers):
            fh = logging.FileHandler(logfile, mode='a', encoding='utf-8')
            fh.setLevel(logging.DEBUG)
            fh.setFormatter(logging.Formatter(_FORMAT))
            root_logger.addHandler(fh)
            root_logger.info('[logging] File handler attached -> %s', logfile)
    except Exception as e:
        logging.getLogger(__name__).exception('Failed to initialize file logging: %s', e)


def min_log(delta: int, k: int) -> float:
    """min{ln Δ, ln k}; natural logs, ln 1 = 0."""
    return min(math.log(max(delta, 1)), math.log(max(k, 1)))


def ceil_log2(x: int) -> int:
    """Bits needed to store a port number in [1, x] (at least one bit)."""
    return max(1, math.ceil(math.log2(x))) if x > 1 else 1


#################################################################
# Exceptions
#################################################################

class CotexError(Exception):
    """Base class for every error raised by the simulator."""


class TreeBuildError(CotexError):
    """Input edges do not describe a rooted tree (or a valid graph)."""


class RevealError(CotexError):
    """A node was revealed without being adjacent to the discovered part."""


class IllegalSelectionError(CotexError):
    """An algorithm selected a move the model does not allow."""


class RoundLimitExceeded(CotexError):
    """A run did not terminate within its round limit."""


class AuditError(CotexError):
    """A proven claim, invariant or bound was violated by a run."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PlannerError(CotexError):
    """A returning robot reported an anchor the planner never assigned."""


class MemoryBudgetError(CotexError):
    """A robot's accounted memory went over Δ + D·⌈log2 Δ⌉ bits."""


class InstanceTooLargeError(CotexError):
    """An instance is over the configured size guard."""


class GridLayoutError(CotexError):
    """Obstacle layout disconnects the grid or breaks Manhattan distances."""


class GameError(CotexError):
    """Illegal urn choice or invalid game setup."""


class SweepError(CotexError):
    """One cell of an experiment sweep failed; the message names the cell."""

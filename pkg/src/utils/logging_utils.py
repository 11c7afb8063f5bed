"""
logging_utils.py

Shared logging utility for the popmatch packages.

This module provides standardized logging functions for the different logging
levels (info, debug, warning, error). Every call may be tagged with the name of
the module doing the work, so a log line reads like
``2026-01-01 12:00:00 [INFO] [graph_utils] Hopcroft-Karp finished``.

Console output goes to stderr so that command reports on stdout stay
byte-identical between runs. A second handler appends to
``<repo>/logs/popmatch.log``.

Environment:
    POPMATCH_LOG_LEVEL: console level name (default ``WARNING``).
    POPMATCH_LOG_DIR: directory of the log file (default ``<repo>/logs``).
"""

import logging
import os
import sys
from typing import Optional

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))

LOG_DIR = os.getenv("POPMATCH_LOG_DIR", os.path.join(ROOT_DIR, "logs"))
CONSOLE_LEVEL = os.getenv("POPMATCH_LOG_LEVEL", "WARNING").upper()

# Setup logger
logger = logging.getLogger("popmatch")
logger.setLevel(logging.DEBUG)
logger.propagate = False

# Formatter style
formatter = logging.Formatter(
    fmt="%(asctime)s [%(levelname)s] %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S"
)

if not logger.handlers:
    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(getattr(logging, CONSOLE_LEVEL, logging.WARNING))
    logger.addHandler(console_handler)

    # File handler
    try:
        os.makedirs(LOG_DIR, exist_ok=True)
        file_handler = logging.FileHandler(
            os.path.join(LOG_DIR, "popmatch.log"), mode="a", encoding="utf-8"
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(logging.DEBUG)
        logger.addHandler(file_handler)
    except OSError as exc:
        logger.warning("File logging disabled, cannot write to '%s': %s", LOG_DIR, exc)


def _log(level: int, message: str, service: Optional[str]) -> None:
    if service:
        logger.log(level, "[%s] %s", service, message)
    else:
        logger.log(level, message)


def info(message: str, service: Optional[str] = None) -> None:
    """
    Record a completed step, e.g. a popular matching found or a suite finished.

    Args:
        message (str): Text of the record.
        service (Optional[str]): Module tag such as ``"popular_utils"``.
    """
    _log(logging.INFO, message, service)


def debug(message: str, service: Optional[str] = None) -> None:
    """Record per-phase detail (phase counts, graph sizes); file log only by default."""
    _log(logging.DEBUG, message, service)


def warning(message: str, service: Optional[str] = None) -> None:
    """Record an ignored setting or a degraded mode; shown on stderr by default."""
    _log(logging.WARNING, message, service)


def error(message: str, service: Optional[str] = None) -> None:
    """
    Record a failure right before the matching exception is raised.

    Args:
        message (str): What failed and on which input.
        service (Optional[str]): Module tag of the failing code.
    """
    _log(logging.ERROR, message, service)

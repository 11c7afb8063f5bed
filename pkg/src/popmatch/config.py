"""
Configuration constants and environment-driven settings for popmatch.

Attributes:
    LAST_RESORT_PREFIX (str): Reserved prefix of synthesized last-resort posts.
    DEFAULT_ORACLE_GUARD (int): Largest instance (applicants and real posts)
        the brute-force oracle accepts unless POPMATCH_ORACLE_GUARD says otherwise.
    CRITERIA (Tuple[str, ...]): Criterion names accepted by ``mincost --criterion``.
"""

import os
import sys
from typing import Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import warning

# Instance model
LAST_RESORT_PREFIX = "!lr:"

# Oracle
ORACLE_GUARD_ENV = "POPMATCH_ORACLE_GUARD"
DEFAULT_ORACLE_GUARD = 7

# Exit codes
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2
EXIT_GUARD = 3

# Optimization criteria
CRITERIA: Tuple[str, ...] = ("maxcard", "mincost-maxcard", "egalitarian", "rankmax", "fair")

# Generator and suite defaults
DEFAULT_TIE_PROB = 0.3
DEFAULT_LIST_LEN = 4
DEFAULT_SUITE_SIZE = 500
DEFAULT_SUITE_APPLICANTS = 6
DEFAULT_SUITE_POSTS = 6
COST_RANGE: Tuple[int, int] = (-9, 9)

# Scale check: applicants (= real posts), list length and wall-clock budgets in seconds
SCALE_APPLICANTS = 5000
SCALE_LIST_LEN = 5
SCALE_CHARACTERIZE_BUDGET = 2.0
SCALE_MINCOST_BUDGET = 30.0
SCALE_DOUBLING_LIMIT = 3.0


def get_oracle_guard() -> int:
    """
    Return the oracle size guard, honouring POPMATCH_ORACLE_GUARD.

    Returns:
        int: Positive guard value; the default when the variable is unset or invalid.
    """
    raw = os.getenv(ORACLE_GUARD_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_ORACLE_GUARD
    try:
        value = int(raw)
    except ValueError:
        warning(f"Ignoring non-integer {ORACLE_GUARD_ENV}={raw!r}", service="config")
        return DEFAULT_ORACLE_GUARD
    if value <= 0:
        warning(f"Ignoring non-positive {ORACLE_GUARD_ENV}={raw!r}", service="config")
        return DEFAULT_ORACLE_GUARD
    return value

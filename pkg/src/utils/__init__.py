"""
Shared infrastructure for the popmatch packages.
"""
from .logging_utils import info, error, debug, warning

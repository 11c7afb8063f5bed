import os
import sys

# Make `src.*` importable when pytest is run from the repository root
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large-instance timing checks (deselect with -m 'not slow')")

import pytest

from src.popmatch.characterization_utils import characterize
from src.popmatch.instance_utils import Instance, parse_instance
from src.popmatch.popular_utils import PopularStructure, build_structure

# Single applicant with a single post.
EX_A = "applicant a1 : p1\n"

# Two applicants sharing the same strict list.
EX_B = "applicant a1 : p1 > p2\napplicant a2 : p1 > p2\n"

# Three applicants competing for two posts; no popular matching exists.
EX_C = "applicant a1 : p1 > p2\napplicant a2 : p1 > p2\napplicant a3 : p1 > p2\n"

# A tie at the top of a1's list.
EX_D = "applicant a1 : (p1 p2)\napplicant a2 : p1 > p2\n"

# EX-B with edge costs.
EX_E_COSTS = "a1 p1 0\na1 p2 5\na2 p1 1\na2 p2 1\n"

TEXTS = {"A": EX_A, "B": EX_B, "C": EX_C, "D": EX_D}


@pytest.fixture
def ex_a() -> Instance:
    return parse_instance(EX_A)


@pytest.fixture
def ex_b() -> Instance:
    return parse_instance(EX_B)


@pytest.fixture
def ex_c() -> Instance:
    return parse_instance(EX_C)


@pytest.fixture
def ex_d() -> Instance:
    return parse_instance(EX_D)


@pytest.fixture
def ps_b(ex_b) -> PopularStructure:
    return build_structure(ex_b)


@pytest.fixture
def ch_b(ps_b):
    return characterize(ps_b)


@pytest.fixture
def ps_d(ex_d) -> PopularStructure:
    return build_structure(ex_d)


@pytest.fixture
def ch_d(ps_d):
    return characterize(ps_d)


@pytest.fixture
def write_file(tmp_path):
    """Write ``text`` to a file under tmp_path and return its path as a string."""

    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write

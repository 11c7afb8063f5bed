import json

import pytest

from src.popmatch.config import EXIT_GUARD, EXIT_INPUT_ERROR, EXIT_NEGATIVE, EXIT_OK, ORACLE_GUARD_ENV
from src.popmatch.generator_utils import generate_instance_text
from src.popmatch.main import main
from tests.conftest import EX_A, EX_B, EX_C, EX_D, EX_E_COSTS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def files(write_file):
    return {
        "A": write_file("a.txt", EX_A),
        "B": write_file("b.txt", EX_B),
        "C": write_file("c.txt", EX_C),
        "D": write_file("d.txt", EX_D),
        "E": write_file("e_costs.txt", EX_E_COSTS),
        "bad": write_file("bad.txt", "applicant a1 p1\n"),
    }


class TestCheck:
    def test_popular_matching_printed(self, capsys, files):
        code, out, _ = run(capsys, "check", files["B"])
        assert code == EXIT_OK
        assert out == "a1 p1\na2 p2\n"

    def test_none(self, capsys, files):
        code, out, _ = run(capsys, "check", files["C"])
        assert code == EXIT_NEGATIVE
        assert out == "NONE\n"

    def test_parse_error(self, capsys, files):
        code, out, err = run(capsys, "check", files["bad"])
        assert code == EXIT_INPUT_ERROR
        assert out == ""
        assert "line 1" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "check", str(tmp_path / "absent.txt"))
        assert code == EXIT_INPUT_ERROR


class TestCharacterize:
    def test_json_report(self, capsys, files):
        code, out, _ = run(capsys, "characterize", files["B"], "--json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert set(report) == {"instance", "result", "certificate"}
        certificate = report["certificate"]
        assert certificate["required_posts"] == ["p1"]
        assert len(certificate["admissible_edges"]) == 4
        assert certificate["dual"]["p1"] == 2
        assert certificate["dual_objective"] == 4
        assert certificate["k1_star"] == 1

    def test_tie_at_the_top(self, capsys, files):
        _, out, _ = run(capsys, "characterize", files["D"], "--json")
        certificate = json.loads(out)["certificate"]
        assert certificate["required_posts"] == []
        assert len(certificate["admissible_edges"]) == 3
        assert certificate["cover"] == ["a1", "a2"]

    def test_text_report(self, capsys, files):
        _, out, _ = run(capsys, "characterize", files["B"])
        assert "required posts: p1\n" in out
        assert "admissible edges: a1-p1 a1-p2 a2-p1 a2-p2\n" in out

    def test_no_popular_matching(self, capsys, files):
        code, out, _ = run(capsys, "characterize", files["C"])
        assert code == EXIT_NEGATIVE
        assert out == "NONE\n"


class TestVerify:
    @pytest.mark.parametrize("method", ["thm1", "thm2", "oracle"])
    def test_popular(self, capsys, files, write_file, method):
        matching = write_file("m.txt", "a1 p1\na2 p2\n")
        code, out, _ = run(capsys, "verify", files["B"], matching, "--method", method)
        assert code == EXIT_OK
        assert out == "POPULAR\n"

    def test_oracle_witness(self, capsys, files, write_file):
        matching = write_file("m.txt", "a1 !lr:a1\n")
        code, out, _ = run(capsys, "verify", files["A"], matching, "--method", "oracle")
        assert code == EXIT_NEGATIVE
        assert out == "NOT POPULAR\nwitness:\na1 p1\n"

    @pytest.mark.parametrize("method", ["thm1", "thm2", "oracle"])
    def test_partial_matching_is_completed(self, capsys, files, write_file, method):
        matching = write_file("m.txt", "a1 p1\n")
        code, out, _ = run(capsys, "verify", files["B"], matching, "--method", method, "--json")
        assert code == EXIT_NEGATIVE
        result = json.loads(out)["result"]
        assert result["matching"] == [["a1", "p1"], ["a2", "!lr:a2"]]
        assert result["popular"] is False

    def test_inconsistent_matching_file(self, capsys, files, write_file):
        matching = write_file("m.txt", "a1 p9\n")
        code, _, _ = run(capsys, "verify", files["B"], matching)
        assert code == EXIT_INPUT_ERROR

    def test_no_popular_matching_is_not_popular(self, capsys, files, write_file):
        matching = write_file("m.txt", "a1 p1\na2 p2\n")
        code, out, _ = run(capsys, "verify", files["C"], matching, "--method", "thm2")
        assert code == EXIT_NEGATIVE
        assert out == "NOT POPULAR\n"


class TestMincost:
    def test_cost_file(self, capsys, files):
        code, out, _ = run(capsys, "mincost", files["B"], "--costs", files["E"])
        assert code == EXIT_OK
        assert out == "a1 p1\na2 p2\ncost: 1\n"

    def test_maxcard(self, capsys, files):
        code, out, _ = run(capsys, "mincost", files["B"], "--criterion", "maxcard", "--json")
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["last_resorts"] == 0
        assert result["cost"] == 0

    def test_no_popular_matching(self, capsys, files):
        code, out, _ = run(capsys, "mincost", files["C"], "--criterion", "egalitarian")
        assert code == EXIT_NEGATIVE
        assert out == "NONE\n"

    def test_cost_outside_e2(self, capsys, files, write_file):
        costs = write_file("costs.txt", "a1 !lr:a1 3\n")
        code, _, err = run(capsys, "mincost", files["B"], "--costs", costs)
        assert code == EXIT_INPUT_ERROR
        assert "(a1, !lr:a1)" in err

    def test_needs_costs_or_criterion(self, capsys, files):
        code, _, _ = run(capsys, "mincost", files["B"])
        assert code == EXIT_INPUT_ERROR

    def test_big_rankmax_costs_in_json(self, capsys, files):
        code, out, _ = run(capsys, "mincost", files["B"], "--criterion", "rankmax", "--json")
        assert code == EXIT_OK
        assert json.loads(out)["result"]["cost"] == -(7**2) - 7


class TestEnumerate:
    def test_lists_matchings(self, capsys, files):
        code, out, _ = run(capsys, "enumerate", files["B"])
        assert code == EXIT_OK
        assert out == "# matching 1\na1 p1\na2 p2\n# matching 2\na1 p2\na2 p1\n"

    def test_limit_and_json(self, capsys, files):
        _, out, _ = run(capsys, "enumerate", files["B"], "--limit", "1", "--json")
        result = json.loads(out)["result"]
        assert result["count"] == 1
        assert result["matchings"] == [[["a1", "p1"], ["a2", "p2"]]]

    def test_count(self, capsys, files):
        assert run(capsys, "enumerate", files["B"], "--count")[:2] == (EXIT_OK, "2\n")
        assert run(capsys, "enumerate", files["C"], "--count")[:2] == (EXIT_NEGATIVE, "0\n")

    def test_bad_limit(self, capsys, files):
        code, _, _ = run(capsys, "enumerate", files["B"], "--limit", "0")
        assert code == EXIT_INPUT_ERROR


class TestOracle:
    def test_lists_popular_matchings(self, capsys, files):
        code, out, _ = run(capsys, "oracle", files["B"], "--json")
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["count"] == 2
        assert result["p1"] == ["p1"]

    def test_guard(self, capsys, write_file, monkeypatch):
        monkeypatch.delenv(ORACLE_GUARD_ENV, raising=False)
        big = write_file("big.txt", generate_instance_text(20, 20, 0.3, 4, 1))
        code, out, err = run(capsys, "oracle", big)
        assert code == EXIT_GUARD
        assert out == ""
        assert "guard" in err

    def test_none(self, capsys, files):
        assert run(capsys, "oracle", files["C"])[:2] == (EXIT_NEGATIVE, "NONE\n")


class TestGen:
    def test_reproducible(self, capsys):
        argv = ["gen", "--applicants", "6", "--posts", "5", "--seed", "17"]
        first = run(capsys, *argv)[:2]
        second = run(capsys, *argv)[:2]
        assert first == second
        assert first[0] == EXIT_OK

    def test_writes_files(self, capsys, tmp_path):
        out_path = tmp_path / "inst.txt"
        costs_path = tmp_path / "costs.txt"
        code, out, _ = run(
            capsys, "gen", "--applicants", "4", "--posts", "4", "--seed", "3",
            "--out", str(out_path), "--costs-out", str(costs_path),
        )
        assert code == EXIT_OK
        assert out == ""
        assert out_path.read_text(encoding="utf-8").count("applicant ") == 4
        code, _, _ = run(capsys, "mincost", str(out_path), "--costs", str(costs_path))
        assert code in (EXIT_OK, EXIT_NEGATIVE)


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["check", "B", "--json"],
            ["characterize", "D", "--json"],
            ["mincost", "B", "--criterion", "fair", "--json"],
            ["enumerate", "B", "--json"],
            ["oracle", "B"],
        ],
    )
    def test_identical_output(self, capsys, files, argv):
        argv = [files[arg] if arg in ("B", "D") else arg for arg in argv]
        assert run(capsys, *argv)[:2] == run(capsys, *argv)[:2]


def test_suite_command(capsys):
    code, out, _ = run(capsys, "suite", "--count", "3", "--applicants", "4", "--posts", "4")
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["instances"] == 3

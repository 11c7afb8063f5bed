import pytest

from src.popmatch.characterization_utils import characterize_or_none, is_popular_char
from src.popmatch.enumeration_utils import PopularEnumerator, count_popular, enumerate_popular
from src.popmatch.generator_utils import generate_instance
from src.popmatch.instance_utils import Matching
from src.popmatch.oracle_utils import brute_force_popular
from src.popmatch.popular_utils import build_structure, is_popular_thm1


class TestEnumeratePopular:
    def test_single_applicant(self, ex_a):
        ch = characterize_or_none(build_structure(ex_a))
        assert list(enumerate_popular(ch)) == [Matching([("a1", "p1")])]

    def test_shared_strict_lists_in_search_order(self, ch_b):
        assert list(enumerate_popular(ch_b)) == [
            Matching([("a1", "p1"), ("a2", "p2")]),
            Matching([("a1", "p2"), ("a2", "p1")]),
        ]

    def test_tie_at_the_top(self, ch_d):
        assert list(enumerate_popular(ch_d)) == [Matching([("a1", "p2"), ("a2", "p1")])]

    def test_limit(self, ps_b, ch_b):
        first = list(enumerate_popular(ch_b, limit=1))
        assert len(first) == 1
        assert is_popular_thm1(ps_b, first[0])
        assert is_popular_char(ch_b, first[0])
        assert first[0] in brute_force_popular(ps_b.instance)

    @pytest.mark.parametrize("limit", [0, -2])
    def test_rejects_non_positive_limit(self, ch_b, limit):
        with pytest.raises(ValueError):
            list(enumerate_popular(ch_b, limit=limit))

    def test_deterministic(self, ch_b):
        assert list(enumerate_popular(ch_b)) == list(enumerate_popular(ch_b))

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        inst = generate_instance(5, 5, 0.3, 3, seed)
        ch = characterize_or_none(build_structure(inst))
        popular = brute_force_popular(inst)
        if ch is None:
            assert not popular
            return
        emitted = list(enumerate_popular(ch))
        assert len(emitted) == len(set(emitted))
        assert set(emitted) == popular

    def test_feasibility_checks_on_small_tree(self, ch_b):
        enumerator = PopularEnumerator(ch_b)
        leaves = list(enumerator.walk())
        assert len(leaves) == 2
        # root, then an include and an exclude check at each of the four branchings
        assert enumerator.nodes_visited == 9


class TestCountPopular:
    def test_shared_strict_lists(self, ch_b):
        assert count_popular(ch_b) == 2

    def test_no_characterization(self, ex_c):
        assert count_popular(characterize_or_none(build_structure(ex_c))) == 0

    def test_tie_at_the_top(self, ch_d):
        assert count_popular(ch_d) == 1

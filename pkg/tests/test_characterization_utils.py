import pytest

from src.popmatch.characterization_utils import (
    DualVector,
    characterize,
    characterize_or_none,
    complementary_slackness_report,
    dual_certificate,
    is_popular_char,
    tight_edges,
    verify_dual,
)
from src.popmatch.exceptions import InvalidMatchingError, NoPopularMatchingError
from src.popmatch.generator_utils import generate_instance
from src.popmatch.instance_utils import Matching
from src.popmatch.oracle_utils import applicant_complete_matchings, brute_force_popular
from src.popmatch.popular_utils import build_structure, is_popular_thm1, mp_value


class TestCharacterize:
    def test_shared_strict_lists(self, ch_b):
        assert ch_b.cover == {"p1"}
        assert ch_b.p_tilde == {"p1"}
        assert ch_b.e_tilde == {("a1", "p1"), ("a2", "p1"), ("a1", "p2"), ("a2", "p2")}
        assert ch_b.tight_edges == ch_b.e_tilde
        assert ch_b.k1_star == 1

    def test_tie_at_the_top(self, ch_d):
        assert ch_d.cover == {"a1", "a2"}
        assert ch_d.p_tilde == frozenset()
        assert ch_d.e_tilde == {("a1", "p1"), ("a1", "p2"), ("a2", "p1")}

    def test_no_popular_matching(self, ex_c):
        with pytest.raises(NoPopularMatchingError):
            characterize(build_structure(ex_c))
        assert characterize_or_none(build_structure(ex_c)) is None

    def test_right_cover_accepts_the_same_matchings(self, ex_d, ps_d, ch_d):
        other = characterize(ps_d, cover_side="right")
        assert other.cover == {"p1", "p2"}
        assert other.e_tilde != ch_d.e_tilde
        for m in applicant_complete_matchings(ex_d):
            assert is_popular_char(other, m) == is_popular_char(ch_d, m)

    @pytest.mark.parametrize("seed", range(60))
    def test_both_covers_accept_the_same_matchings(self, seed):
        inst = generate_instance(5, 5, 0.3, 4, seed)
        ps = build_structure(inst)
        left = characterize_or_none(ps)
        if left is None:
            return
        right = characterize(ps, cover_side="right")
        for m in applicant_complete_matchings(inst):
            assert is_popular_char(left, m) == is_popular_char(right, m)

    @pytest.mark.parametrize("seed", range(30))
    def test_invariants_on_random_instances(self, seed):
        inst = generate_instance(5, 5, 0.3, 4, seed)
        ps = build_structure(inst)
        ch = characterize_or_none(ps)
        if ch is None:
            return
        assert len(ch.cover) == ps.k1_star
        assert ch.p_tilde == {p for p in inst.posts if p in ch.cover}
        assert ch.p_tilde == {p for p in inst.posts if ch.dual[p] > 0}
        assert ch.e_tilde == tight_edges(ps, ch.dual)
        assert verify_dual(ps, ch.dual)
        assert ch.dual.objective == ps.num_applicants * ps.k1_star + ps.num_applicants


class TestDualCertificate:
    def test_shared_strict_lists(self, ps_b):
        y = dual_certificate(ps_b, frozenset({"p1"}))
        assert (y["a1"], y["a2"], y["p1"], y["p2"]) == (1, 1, 2, 0)
        assert y["!lr:a1"] == y["!lr:a2"] == 0
        assert y.objective == 4

    def test_tie_at_the_top(self, ps_d):
        y = dual_certificate(ps_d, frozenset({"a1", "a2"}))
        assert y["a1"] == y["a2"] == 3
        assert all(y[p] == 0 for p in ps_d.instance.posts)
        assert y.objective == 6
        assert y["a1"] + y["p1"] == ps_d.num_applicants + 1

    def test_single_applicant(self, ex_a):
        y = dual_certificate(build_structure(ex_a), frozenset({"a1"}))
        assert y["a1"] == 2
        assert y.objective == 2

    def test_rejects_non_cover(self, ps_b):
        with pytest.raises(ValueError):
            dual_certificate(ps_b, frozenset({"a1"}))


class TestVerifyDual:
    def test_certificate_is_feasible(self, ps_b, ch_b):
        assert verify_dual(ps_b, ch_b.dual)

    def test_lowered_price_is_infeasible(self, ps_b, ch_b):
        y = dict(ch_b.dual.y)
        y["p1"] = 1
        assert not verify_dual(ps_b, DualVector(y=y))

    def test_all_zero_is_infeasible(self, ps_b):
        zero = {v: 0 for v in ps_b.instance.applicants + ps_b.instance.posts}
        assert not verify_dual(ps_b, DualVector(y=zero))

    def test_negative_price_is_infeasible(self, ps_b, ch_b):
        y = dict(ch_b.dual.y)
        y["p2"] = -1
        assert not verify_dual(ps_b, DualVector(y=y))


class TestIsPopularChar:
    def test_popular(self, ch_b):
        assert is_popular_char(ch_b, Matching([("a2", "p1"), ("a1", "p2")]))

    def test_leaves_admissible_edges(self, ch_b):
        assert not is_popular_char(ch_b, Matching([("a1", "p1"), ("a2", "!lr:a2")]))

    def test_no_required_posts(self, ch_d):
        assert is_popular_char(ch_d, Matching([("a1", "p2"), ("a2", "p1")]))

    def test_requires_complete_matching(self, ch_b):
        with pytest.raises(InvalidMatchingError):
            is_popular_char(ch_b, Matching([("a1", "p1")]))

    @pytest.mark.parametrize("seed", range(30))
    def test_three_verifiers_agree(self, seed):
        inst = generate_instance(4, 4, 0.3, 3, seed)
        ps = build_structure(inst)
        ch = characterize_or_none(ps)
        popular = brute_force_popular(inst)
        assert (ch is None) == (not popular)
        for m in applicant_complete_matchings(inst):
            truth = m in popular
            assert is_popular_thm1(ps, m) == truth
            assert (ch is not None and is_popular_char(ch, m)) == truth


class TestComplementarySlackness:
    def test_popular_matchings_are_certified(self, ps_b, ch_b):
        for m in (Matching([("a1", "p1"), ("a2", "p2")]), Matching([("a1", "p2"), ("a2", "p1")])):
            assert complementary_slackness_report(ps_b, ch_b.dual, m) == []

    def test_unpopular_matching_is_reported(self, ps_b, ch_b):
        report = complementary_slackness_report(ps_b, ch_b.dual, Matching([("a1", "!lr:a1"), ("a2", "p1")]))
        assert [v.kind for v in report] == ["outside_e2"]
        assert report[0].subject == "(a1, !lr:a1)"

    def test_required_post_left_free(self, ps_b, ch_b):
        report = complementary_slackness_report(ps_b, ch_b.dual, Matching([("a1", "p2")]))
        assert [v.kind for v in report] == ["unmatched_post_priced"]
        assert report[0].subject == "p1"

    @pytest.mark.parametrize("seed", range(20))
    def test_strong_duality(self, seed):
        inst = generate_instance(4, 4, 0.3, 3, seed)
        ps = build_structure(inst)
        ch = characterize_or_none(ps)
        if ch is None:
            return
        for m in brute_force_popular(inst):
            assert mp_value(ps, m) == ch.dual.objective
            assert complementary_slackness_report(ps, ch.dual, m) == []

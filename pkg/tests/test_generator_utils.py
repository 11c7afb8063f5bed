import pytest

from src.popmatch.generator_utils import generate_instance, generate_instance_text, random_costs, serialize_costs
from src.popmatch.optimization_utils import parse_costs
from src.popmatch.popular_utils import build_structure
from src.popmatch.suite_utils import CHECKS, check_instance, run_suite


class TestGenerateInstance:
    def test_same_seed_same_text(self):
        assert generate_instance_text(6, 6, 0.3, 4, 42) == generate_instance_text(6, 6, 0.3, 4, 42)

    def test_different_seeds_differ(self):
        assert generate_instance_text(6, 6, 0.3, 4, 1) != generate_instance_text(6, 6, 0.3, 4, 2)

    def test_shape(self):
        inst = generate_instance(5, 3, 0.5, 4, seed=9)
        assert inst.applicants == ("a1", "a2", "a3", "a4", "a5")
        assert set(inst.real_posts) <= {"p1", "p2", "p3"}
        for a in inst.applicants:
            real = inst.posts_of(a)[:-1]
            assert 1 <= len(real) <= 3

    def test_no_ties_when_probability_is_zero(self):
        inst = generate_instance(6, 6, 0.0, 4, seed=3)
        assert all(len(group) == 1 for a in inst.applicants for group in inst.prefs[a])

    @pytest.mark.parametrize("tie_prob", [-0.1, 1.5])
    def test_rejects_bad_probability(self, tie_prob):
        with pytest.raises(ValueError):
            generate_instance_text(2, 2, tie_prob, 2, 0)


class TestRandomCosts:
    def test_costs_cover_e2_within_bounds(self):
        ps = build_structure(generate_instance(5, 5, 0.3, 4, seed=4))
        w = random_costs(ps, seed=4)
        assert set(w.weights) == ps.e2
        assert all(-9 <= v <= 9 for v in w.weights.values())

    def test_cost_file_reads_back(self):
        inst = generate_instance(5, 5, 0.3, 4, seed=5)
        ps = build_structure(inst)
        w = random_costs(ps, seed=5)
        assert parse_costs(serialize_costs(ps, w), inst) == w


class TestSuite:
    @pytest.mark.parametrize("seed", range(15))
    def test_check_instance_is_clean(self, seed):
        counters = check_instance(seed, applicants=4, posts=4, list_len=3)
        assert all(counters[name] == 0 for name in CHECKS)
        assert counters["matchings"] > 0

    def test_summary_independent_of_workers(self):
        serial = run_suite(4, seed=100, workers=1, applicants=4, posts=4)
        parallel = run_suite(4, seed=100, workers=2, applicants=4, posts=4)
        assert serial == parallel
        assert serial["instances"] == 4

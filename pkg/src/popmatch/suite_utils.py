"""
Property checks of one generated instance against the brute-force oracle.

``check_instance`` returns a dictionary of discrepancy counters; every counter
is zero on a correct implementation. ``run_suite`` aggregates them over a
range of seeds, optionally in worker processes, and the summary does not
depend on the number of workers. ``scale_check`` times the polynomial
algorithms on large generated instances.
"""

import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Tuple, Union

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import info
from src.popmatch.characterization_utils import (
    characterize,
    characterize_or_none,
    complementary_slackness_report,
    is_popular_char,
    verify_dual,
)
from src.popmatch.config import (
    DEFAULT_LIST_LEN,
    DEFAULT_TIE_PROB,
    SCALE_APPLICANTS,
    SCALE_CHARACTERIZE_BUDGET,
    SCALE_DOUBLING_LIMIT,
    SCALE_LIST_LEN,
    SCALE_MINCOST_BUDGET,
)
from src.popmatch.enumeration_utils import enumerate_popular
from src.popmatch.generator_utils import generate_instance, random_costs
from src.popmatch.graph_utils import min_vertex_cover
from src.popmatch.instance_utils import Instance, Matching, RankTable, is_last_resort
from src.popmatch.optimization_utils import criterion_costs, min_cost_popular
from src.popmatch.oracle_utils import (
    applicant_complete_matchings,
    brute_force_p1,
    brute_force_popular,
    rank_profile,
)
from src.popmatch.popular_utils import build_structure, find_popular_matching, is_popular_thm1, mp_value

CHECKS = (
    "three_way",
    "covers",
    "existence",
    "duality",
    "konig",
    "p1",
    "mincost",
    "criteria",
    "enumeration",
)


def criterion_score(inst: Instance, ranks: RankTable, criterion: str, m: Matching) -> Union[int, Tuple[int, ...]]:
    """
    Quantity a criterion optimizes, comparable with ``min``/``max``.

    ``maxcard`` counts last resorts (minimized), ``rankmax`` is the rank profile
    (maximized) and ``fair`` the reversed rank profile (minimized).
    """
    if criterion == "maxcard":
        return sum(1 for _, p in m if is_last_resort(p))
    profile = rank_profile(inst, m, ranks)
    if criterion == "rankmax":
        return profile
    if criterion == "fair":
        return tuple(reversed(profile))
    raise ValueError(f"no oracle score for criterion '{criterion}'")


def check_instance(
    seed: int,
    applicants: int = 6,
    posts: int = 6,
    tie_prob: float = DEFAULT_TIE_PROB,
    list_len: int = DEFAULT_LIST_LEN,
) -> Dict[str, int]:
    """
    Run every property check on the instance generated from ``seed``.

    Returns:
        Dict[str, int]: Discrepancies per check name plus ``popular`` (1 if the
        instance admits a popular matching) and ``matchings`` (number of
        applicant-complete matchings examined).
    """
    inst = generate_instance(applicants, posts, tie_prob, list_len, seed)
    ps = build_structure(inst)
    oracle = brute_force_popular(inst)
    ch = characterize_or_none(ps)
    counters = {name: 0 for name in CHECKS}
    counters["popular"] = 1 if oracle else 0

    candidates = list(applicant_complete_matchings(inst))
    counters["matchings"] = len(candidates)
    mirrored = characterize(ps, cover_side="right") if ch is not None else None
    for m in candidates:
        truth = m in oracle
        if is_popular_thm1(ps, m) != truth:
            counters["three_way"] += 1
        if (ch is not None and is_popular_char(ch, m)) != truth:
            counters["three_way"] += 1
        if mirrored is not None and is_popular_char(mirrored, m) != is_popular_char(ch, m):
            counters["covers"] += 1

    if (find_popular_matching(ps) is None) != (not oracle):
        counters["existence"] += 1

    cover = min_vertex_cover(ps.g1, ps.m1)
    if len(cover) != ps.k1_star or any(a not in cover and p not in cover for a, p in ps.e1):
        counters["konig"] += 1
    if brute_force_p1(inst) != ps.p1:
        counters["p1"] += 1

    if ch is None:
        return counters

    optimum = ps.num_applicants * ps.k1_star + ps.num_applicants
    if not verify_dual(ps, ch.dual) or ch.dual.objective != optimum:
        counters["duality"] += 1
    for m in oracle:
        if mp_value(ps, m) != optimum or complementary_slackness_report(ps, ch.dual, m):
            counters["duality"] += 1

    w = random_costs(ps, seed=seed)
    best = min(sum(w(e) for e in m) for m in oracle)
    result = min_cost_popular(ch, w)
    if result.cost != best or result.matching not in oracle:
        counters["mincost"] += 1

    ranks = RankTable(inst)
    for criterion, pick in (("maxcard", min), ("rankmax", max), ("fair", min)):
        chosen = min_cost_popular(ch, criterion_costs(inst, ps, criterion)).matching
        target = pick(criterion_score(inst, ranks, criterion, m) for m in oracle)
        if chosen not in oracle or criterion_score(inst, ranks, criterion, chosen) != target:
            counters["criteria"] += 1

    emitted: List = list(enumerate_popular(ch))
    if len(emitted) != len(set(emitted)) or set(emitted) != set(oracle):
        counters["enumeration"] += 1
    return counters


def _check_seed(args) -> Dict[str, int]:
    return check_instance(*args)


def run_suite(
    count: int,
    seed: int = 0,
    workers: int = 1,
    applicants: int = 6,
    posts: int = 6,
) -> Dict[str, int]:
    """
    Aggregate ``check_instance`` over seeds ``seed .. seed+count-1``.

    Returns:
        Dict[str, int]: Summed counters plus ``instances``.
    """
    jobs = [(s, applicants, posts) for s in range(seed, seed + count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_seed, jobs))
    else:
        results = [_check_seed(job) for job in jobs]
    summary: Dict[str, int] = {"instances": len(results)}
    for result in results:
        for key, value in result.items():
            summary[key] = summary.get(key, 0) + value
    info(f"Suite finished on {len(results)} instances", service="suite_utils")
    return summary


def _time_characterization(applicants: int, seed: int, repeats: int) -> Tuple[float, Any]:
    """Best wall time of build + existence + characterization, with the last characterization."""
    inst = generate_instance(applicants, applicants, DEFAULT_TIE_PROB, SCALE_LIST_LEN, seed)
    best = float("inf")
    ch = None
    for _ in range(repeats):
        started = time.perf_counter()
        ch = characterize_or_none(build_structure(inst))
        best = min(best, time.perf_counter() - started)
    return best, ch


def scale_check(applicants: int = SCALE_APPLICANTS, seed: int = 0, repeats: int = 2) -> Dict[str, Any]:
    """
    Time characterization at ``applicants`` and twice that, and one minimum-cost solve.

    Instances have as many real posts as applicants and lists of at most
    ``SCALE_LIST_LEN`` groups. Each characterization time is the best of
    ``repeats`` runs.

    Returns:
        Dict[str, Any]: Seconds per stage, the doubling ratio, whether a popular
        matching exists and ``within_budget``.
    """
    base_seconds, ch = _time_characterization(applicants, seed, repeats)
    doubled_seconds, _ = _time_characterization(2 * applicants, seed, repeats)
    ratio = doubled_seconds / base_seconds if base_seconds > 0 else 0.0

    mincost_seconds = None
    if ch is not None:
        w = random_costs(ch.structure, seed=seed)
        started = time.perf_counter()
        min_cost_popular(ch, w)
        mincost_seconds = time.perf_counter() - started

    report: Dict[str, Any] = {
        "applicants": applicants,
        "popular": ch is not None,
        "characterize_seconds": round(base_seconds, 3),
        "characterize_doubled_seconds": round(doubled_seconds, 3),
        "doubling_ratio": round(ratio, 3),
        "mincost_seconds": round(mincost_seconds, 3) if mincost_seconds is not None else None,
    }
    report["within_budget"] = (
        base_seconds < SCALE_CHARACTERIZE_BUDGET
        and ratio < SCALE_DOUBLING_LIMIT
        and (mincost_seconds is None or mincost_seconds < SCALE_MINCOST_BUDGET)
    )
    info(f"Scale check at {applicants} applicants: {report}", service="suite_utils")
    return report

"""
Brute-force ground truth for small instances.

Popularity is decided straight from its definition by comparing a matching
with every applicant-complete challenger. Nothing here sits on a production
path; the functions refuse instances beyond the configured guard.
"""

import os
import sys
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

import networkx as nx

from src.utils import debug, error
from src.popmatch.config import get_oracle_guard
from src.popmatch.exceptions import InstanceTooLargeForOracleError
from src.popmatch.graph_utils import BipartiteGraph
from src.popmatch.instance_utils import Instance, Matching, Pair, RankTable


def _check_guard(inst: Instance, guard: Optional[int]) -> None:
    limit = get_oracle_guard() if guard is None else guard
    n_a, n_p = len(inst.applicants), len(inst.real_posts)
    if n_a > limit or n_p > limit:
        error(
            f"Oracle refused instance with {n_a} applicants and {n_p} real posts (guard {limit})",
            service="oracle_utils",
        )
        raise InstanceTooLargeForOracleError(
            f"instance has {n_a} applicants and {n_p} real posts, oracle guard is {limit}"
        )


def compare(inst: Instance, m1: Matching, m2: Matching, ranks: Optional[RankTable] = None) -> int:
    """
    Popularity score of ``m1`` against ``m2``.

    Returns:
        int: Applicants preferring ``m1`` minus applicants preferring ``m2``.
    """
    ranks = ranks or RankTable(inst)
    score = 0
    for a in inst.applicants:
        p1, p2 = m1.post_of(a), m2.post_of(a)
        if p1 == p2:
            continue
        if p2 is None or (p1 is not None and ranks.rank(a, p1) < ranks.rank(a, p2)):
            score += 1
        elif p1 is None or ranks.rank(a, p2) < ranks.rank(a, p1):
            score -= 1
    return score


def applicant_complete_matchings(inst: Instance) -> Iterator[Matching]:
    """Every applicant-complete matching over E, assigning applicants in input order."""
    applicants = inst.applicants
    options = [inst.posts_of(a) for a in applicants]
    chosen: List[str] = []
    used: Set[str] = set()
    # explicit stack of next-option indices, one per assigned applicant
    cursor: List[int] = [0]
    if not applicants:
        yield Matching()
        return
    while cursor:
        depth = len(cursor) - 1
        i = cursor[-1]
        if i >= len(options[depth]):
            cursor.pop()
            if chosen:
                used.discard(chosen.pop())
            continue
        cursor[-1] = i + 1
        post = options[depth][i]
        if post in used:
            continue
        chosen.append(post)
        used.add(post)
        if depth + 1 == len(applicants):
            yield Matching(zip(applicants, chosen))
            used.discard(chosen.pop())
        else:
            cursor.append(0)


def more_popular_challenger(
    inst: Instance,
    m: Matching,
    guard: Optional[int] = None,
    ranks: Optional[RankTable] = None,
) -> Optional[Matching]:
    """
    First applicant-complete matching more popular than ``m``, or None if ``m`` is popular.

    Raises:
        InstanceTooLargeForOracleError: Beyond the size guard.
    """
    _check_guard(inst, guard)
    ranks = ranks or RankTable(inst)
    for challenger in applicant_complete_matchings(inst):
        if compare(inst, challenger, m, ranks) > 0:
            return challenger
    return None


def brute_force_popular(inst: Instance, guard: Optional[int] = None) -> FrozenSet[Matching]:
    """
    All popular applicant-complete matchings, by exhaustive comparison.

    Args:
        inst (Instance): The instance.
        guard (Optional[int]): Size guard; defaults to POPMATCH_ORACLE_GUARD or 7.

    Returns:
        FrozenSet[Matching]: The popular matchings (possibly empty).

    Raises:
        InstanceTooLargeForOracleError: Beyond the size guard.
    """
    _check_guard(inst, guard)
    ranks = RankTable(inst)
    candidates = list(applicant_complete_matchings(inst))
    # every candidate is applicant-complete, so compare() reduces to rank vectors
    vectors = [tuple(ranks.rank(a, m.post_of(a)) for a in inst.applicants) for m in candidates]
    popular = set()
    for m, mine in zip(candidates, vectors):
        beaten = False
        for theirs in vectors:
            score = sum((t < o) - (o < t) for t, o in zip(theirs, mine))
            if score > 0:
                beaten = True
                break
        if not beaten:
            popular.add(m)
    debug(
        f"Oracle: {len(popular)} popular among {len(candidates)} applicant-complete matchings",
        service="oracle_utils",
    )
    return frozenset(popular)


def _all_matchings(graph: BipartiteGraph) -> Iterator[Tuple[Pair, ...]]:
    left = graph.left

    def extend(index: int, used: FrozenSet[str], acc: Tuple[Pair, ...]) -> Iterator[Tuple[Pair, ...]]:
        if index == len(left):
            yield acc
            return
        u = left[index]
        yield from extend(index + 1, used, acc)
        for v in graph.neighbors_of_left(u):
            if v not in used:
                yield from extend(index + 1, used | {v}, acc + ((u, v),))

    return extend(0, frozenset(), ())


def brute_force_p1(inst: Instance, guard: Optional[int] = None) -> FrozenSet[str]:
    """
    Posts matched by every maximum matching of the first-choice graph.

    Raises:
        InstanceTooLargeForOracleError: Beyond the size guard.
    """
    _check_guard(inst, guard)
    g1 = BipartiteGraph(
        inst.applicants, inst.posts, [(a, p) for a in inst.applicants for p in inst.prefs[a][0]]
    )
    best = -1
    always: Set[str] = set()
    for pairs in _all_matchings(g1):
        posts = {p for _, p in pairs}
        if len(pairs) > best:
            best = len(pairs)
            always = posts
        elif len(pairs) == best:
            always &= posts
    return frozenset(always)


def all_maximum_matchings(graph: BipartiteGraph) -> List[Matching]:
    """Every maximum matching of a small graph."""
    every = list(_all_matchings(graph))
    best = max(len(pairs) for pairs in every)
    return [Matching(pairs) for pairs in every if len(pairs) == best]


def reference_matching_size(graph: BipartiteGraph) -> int:
    """Maximum matching size computed by networkx, independent of graph_utils."""
    g = nx.Graph()
    g.add_nodes_from(graph.left, bipartite=0)
    g.add_nodes_from(graph.right, bipartite=1)
    g.add_edges_from(graph.edges)
    if not graph.left:
        return 0
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=list(graph.left))
    # networkx reports each matched pair in both directions
    return len(matching) // 2


def rank_profile(inst: Instance, m: Matching, ranks: Optional[RankTable] = None) -> Tuple[int, ...]:
    """Number of applicants matched at rank 1, 2, ... up to the longest list."""
    ranks = ranks or RankTable(inst)
    depth = max((len(inst.prefs[a]) for a in inst.applicants), default=0)
    counts: Dict[int, int] = {r: 0 for r in range(1, depth + 1)}
    for a, p in m:
        counts[ranks.rank(a, p)] += 1
    return tuple(counts[r] for r in range(1, depth + 1))


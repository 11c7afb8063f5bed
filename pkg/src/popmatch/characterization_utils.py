"""
Cover-based characterization of the popular matchings of an instance.

Given a minimum cover X of G1, a matching is popular iff it stays inside the
admissible edges Ẽ and matches every required post of P̃ = P ∩ X. The same sets
come out of an optimal vertex pricing y* of the dual of the weighted matching
problem on G2: P̃ holds the posts with a positive price and Ẽ the tight edges.
Both derivations are computed and must agree.
"""

import os
import sys
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import info, debug, error
from src.popmatch.exceptions import (
    InvariantViolationError,
    NoPopularMatchingError,
)
from src.popmatch.graph_utils import min_vertex_cover
from src.popmatch.instance_utils import Matching, Pair, validate_matching
from src.popmatch.popular_utils import PopularStructure, find_popular_matching


@dataclass(frozen=True)
class DualVector:
    """Non-negative integer price of every vertex."""

    y: Mapping[str, int]

    def __getitem__(self, vertex: str) -> int:
        return self.y[vertex]

    @property
    def objective(self) -> int:
        return sum(self.y.values())


@dataclass(frozen=True)
class Characterization:
    """
    Attributes:
        structure (PopularStructure): The structure it was derived from.
        cover (FrozenSet[str]): Minimum cover X of G1.
        p_tilde (FrozenSet[str]): Required posts, P ∩ X.
        e_tilde (FrozenSet[Pair]): Admissible edges from the cover formula.
        tight_edges (FrozenSet[Pair]): Admissible edges read off the dual as tight edges.
        dual (DualVector): Optimal dual pricing built from X.
        k1_star (int): Size of a maximum matching of G1.
    """

    structure: PopularStructure
    cover: FrozenSet[str]
    p_tilde: FrozenSet[str]
    e_tilde: FrozenSet[Pair]
    tight_edges: FrozenSet[Pair]
    dual: DualVector
    k1_star: int


@dataclass(frozen=True)
class SlacknessViolation:
    """
    One failed complementary-slackness condition.

    ``kind`` is one of ``outside_e2``, ``e1_slack``, ``e2_slack`` and
    ``unmatched_post_priced``; ``subject`` names the edge or post.
    """

    kind: str
    subject: str
    detail: str


def _check_cover(ps: PopularStructure, cover: FrozenSet[str]) -> None:
    for a, p in sorted(ps.e1, key=ps.instance.edge_key):
        if a not in cover and p not in cover:
            raise ValueError(f"vertex set is not a cover of G1: edge ({a}, {p}) is uncovered")


def dual_certificate(ps: PopularStructure, cover: FrozenSet[str]) -> DualVector:
    """
    Price vertices from a minimum cover of G1.

    Applicants in the cover get |A|+1 and the others 1; posts in the cover get
    |A| and the others 0. The objective equals |A|·|X| + |A|.

    Args:
        ps (PopularStructure): Structure of the instance.
        cover (FrozenSet[str]): A minimum cover of G1.

    Returns:
        DualVector: Feasible (and, for a minimum cover, optimal) dual solution.

    Raises:
        ValueError: If ``cover`` misses an edge of G1.
    """
    _check_cover(ps, cover)
    n_a = ps.num_applicants
    y: Dict[str, int] = {}
    for a in ps.instance.applicants:
        y[a] = n_a + 1 if a in cover else 1
    for p in ps.instance.posts:
        y[p] = n_a if p in cover else 0
    return DualVector(y=y)


def verify_dual(ps: PopularStructure, y: DualVector) -> bool:
    """
    Check dual feasibility: y(a)+y(p) ≥ |A|+1 on E1, y(a)+y(p) ≥ 1 on E2 minus E1,
    and y ≥ 0 on every vertex.
    """
    vertices = ps.instance.applicants + ps.instance.posts
    if any(v not in y.y or y.y[v] < 0 for v in vertices):
        return False
    n_a = ps.num_applicants
    for a, p in ps.e2:
        bound = n_a + 1 if (a, p) in ps.e1 else 1
        if y.y[a] + y.y[p] < bound:
            return False
    return True


def tight_edges(ps: PopularStructure, y: DualVector) -> FrozenSet[Pair]:
    """E1 edges priced exactly |A|+1 together with E2 minus E1 edges priced exactly 1."""
    n_a = ps.num_applicants
    tight = set()
    for a, p in ps.e2:
        target = n_a + 1 if (a, p) in ps.e1 else 1
        if y.y[a] + y.y[p] == target:
            tight.add((a, p))
    return frozenset(tight)


def characterize(ps: PopularStructure, cover_side: str = "left") -> Characterization:
    """
    Build the required posts and admissible edges of an instance.

    Args:
        ps (PopularStructure): Structure of the instance.
        cover_side (str): Side the König construction starts from (``"left"`` is canonical).

    Returns:
        Characterization: Cover, P̃, Ẽ and the dual certificate.

    Raises:
        NoPopularMatchingError: If the instance admits no popular matching.
        InvariantViolationError: If the two derivations of Ẽ or P̃ disagree.
    """
    try:
        if find_popular_matching(ps) is None:
            raise NoPopularMatchingError("the instance admits no popular matching")

        cover = min_vertex_cover(ps.g1, ps.m1, start=cover_side)
        if len(cover) != ps.k1_star:
            raise InvariantViolationError(f"cover has {len(cover)} vertices, k1* = {ps.k1_star}")

        applicants = set(ps.instance.applicants)
        x_a = {v for v in cover if v in applicants}
        x_p = frozenset(v for v in cover if v not in applicants)

        e_tilde = set()
        for a, p in ps.e2:
            if (a, p) in ps.e1:
                if (a in x_a) != (p in x_p):
                    e_tilde.add((a, p))
            elif a not in x_a and p not in x_p:
                e_tilde.add((a, p))

        dual = dual_certificate(ps, cover)
        tight = tight_edges(ps, dual)
        if tight != e_tilde:
            raise InvariantViolationError("tight edges of the dual differ from the cover formula")
        priced = frozenset(p for p in ps.instance.posts if dual[p] > 0)
        if priced != x_p:
            raise InvariantViolationError("positively priced posts differ from P ∩ X")

        ch = Characterization(
            structure=ps,
            cover=cover,
            p_tilde=x_p,
            e_tilde=frozenset(e_tilde),
            tight_edges=tight,
            dual=dual,
            k1_star=ps.k1_star,
        )
        debug(
            f"Characterization: |X|={len(cover)}, |P~|={len(x_p)}, |E~|={len(e_tilde)}, "
            f"dual objective={dual.objective}",
            service="characterization_utils",
        )
        info("Characterization built", service="characterization_utils")
        return ch
    except NoPopularMatchingError:
        info("Characterization skipped: no popular matching", service="characterization_utils")
        raise
    except Exception as exc:
        error(f"Failed to characterize instance: {exc}", service="characterization_utils")
        raise


def is_popular_char(ch: Characterization, m: Matching) -> bool:
    """
    Popularity test of an applicant-complete matching: ``m`` lies inside Ẽ
    and matches every post of P̃.

    Raises:
        InvalidMatchingError: If ``m`` is not an applicant-complete matching over E.
    """
    validate_matching(ch.structure.instance, m, complete=True)
    if any(pair not in ch.e_tilde for pair in m):
        return False
    matched = m.matched_posts
    return all(p in matched for p in ch.p_tilde)


def complementary_slackness_report(
    ps: PopularStructure, y: DualVector, m: Matching
) -> List[SlacknessViolation]:
    """
    List the complementary-slackness conditions ``m`` and ``y`` violate.

    The list is empty iff every E1 edge of ``m`` is priced |A|+1, every other
    edge of ``m`` is priced 1, every unmatched post has price 0 and ``m`` lies
    inside E2, in which case ``m`` and ``y`` prove each other optimal.

    Args:
        ps (PopularStructure): Structure of the instance.
        y (DualVector): Feasible dual pricing.
        m (Matching): Applicant-complete matching.

    Returns:
        List[SlacknessViolation]: Violations in canonical order.
    """
    inst = ps.instance
    n_a = ps.num_applicants
    report: List[SlacknessViolation] = []
    for a, p in m.canonical(inst):
        subject = f"({a}, {p})"
        if (a, p) not in ps.e2:
            report.append(SlacknessViolation("outside_e2", subject, "edge is not in E2"))
            continue
        total = y[a] + y[p]
        if (a, p) in ps.e1 and total != n_a + 1:
            report.append(SlacknessViolation("e1_slack", subject, f"y(a)+y(p) = {total}, expected {n_a + 1}"))
        elif (a, p) not in ps.e1 and total != 1:
            report.append(SlacknessViolation("e2_slack", subject, f"y(a)+y(p) = {total}, expected 1"))
    matched = m.matched_posts
    for p in inst.posts:
        if p not in matched and y[p] != 0:
            report.append(SlacknessViolation("unmatched_post_priced", p, f"y(p) = {y[p]}"))
    return report


def characterize_or_none(ps: PopularStructure) -> Optional[Characterization]:
    """Characterization, or None when no popular matching exists."""
    try:
        return characterize(ps)
    except NoPopularMatchingError:
        return None

"""
Popular-matching structure: f-posts, s-posts, P1, the graphs G1 and G2, the
existence test and the verifier built on the classical characterization
(M ∩ E1 is a maximum matching of G1 and M lies inside E2).
"""

import os
import sys
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import info, debug, error
from src.popmatch.exceptions import InvalidMatchingError, InvariantViolationError
from src.popmatch.graph_utils import (
    BipartiteGraph,
    EouLabels,
    VertexLabel,
    augment_to_maximum,
    eou_classify,
    max_matching,
)
from src.popmatch.instance_utils import Instance, Matching, Pair, validate_matching


@dataclass(frozen=True)
class PopularStructure:
    """
    Derived structure of an instance.

    Attributes:
        instance (Instance): The instance it was built from.
        f (Mapping[str, Tuple[str, ...]]): Top tie group of every applicant.
        s (Mapping[str, Tuple[str, ...]]): Most-preferred posts outside P1 (empty only
            for an applicant whose list holds nothing but its last resort).
        p1 (FrozenSet[str]): Posts matched by every maximum matching of G1.
        e1 (FrozenSet[Pair]): First-choice edges.
        e2 (FrozenSet[Pair]): Edges to f- and s-posts.
        k1_star (int): Size of a maximum matching of G1.
        g1 (BipartiteGraph): First-choice graph.
        g2 (BipartiteGraph): Graph of E2.
        m1 (Matching): The maximum matching of G1 the labeling was computed from.
        labels (EouLabels): Even/odd/unreachable labels of G1 relative to ``m1``.
    """

    instance: Instance
    f: Mapping[str, Tuple[str, ...]]
    s: Mapping[str, Tuple[str, ...]]
    p1: FrozenSet[str]
    e1: FrozenSet[Pair]
    e2: FrozenSet[Pair]
    k1_star: int
    g1: BipartiteGraph
    g2: BipartiteGraph
    m1: Matching
    labels: EouLabels

    @property
    def num_applicants(self) -> int:
        return len(self.instance.applicants)


def build_structure(inst: Instance) -> PopularStructure:
    """
    Build f, G1, P1, s and G2 for an instance.

    P1 is read off the even/odd/unreachable labeling of one maximum matching of
    G1: a post lies in P1 iff it is not even.

    Args:
        inst (Instance): The instance.

    Returns:
        PopularStructure: The derived structure.
    """
    f: Dict[str, Tuple[str, ...]] = {a: inst.prefs[a][0] for a in inst.applicants}
    e1_ordered = [(a, p) for a in inst.applicants for p in f[a]]
    g1 = BipartiteGraph(inst.applicants, inst.posts, e1_ordered)
    m1 = max_matching(g1)
    labels = eou_classify(g1, m1)
    p1 = frozenset(p for p in inst.posts if labels.of(p) is not VertexLabel.EVEN)

    s: Dict[str, Tuple[str, ...]] = {}
    for a in inst.applicants:
        s[a] = ()
        for group in inst.prefs[a]:
            outside = tuple(p for p in group if p not in p1)
            if outside:
                s[a] = outside
                break

    e2_ordered: List[Pair] = list(e1_ordered)
    for a in inst.applicants:
        e2_ordered.extend((a, p) for p in s[a] if p not in f[a])
    e2_ordered.sort(key=inst.edge_key)
    g2 = BipartiteGraph(inst.applicants, inst.posts, e2_ordered)

    ps = PopularStructure(
        instance=inst,
        f=f,
        s=s,
        p1=p1,
        e1=frozenset(e1_ordered),
        e2=frozenset(e2_ordered),
        k1_star=len(m1),
        g1=g1,
        g2=g2,
        m1=m1,
        labels=labels,
    )
    debug(
        f"Structure built: |E1|={len(ps.e1)}, |E2|={len(ps.e2)}, |P1|={len(p1)}, k1*={ps.k1_star}",
        service="popular_utils",
    )
    return ps


def pruned_g2(ps: PopularStructure) -> BipartiteGraph:
    """
    G2 without the edges no popular matching can use.

    Removed are E1 edges between two non-even vertices where one is odd (they lie
    in no maximum matching of G1) and the s-edges of applicants that are not
    even (such applicants are matched inside every maximum matching of G1, so a
    popular matching gives them an f-post).
    """
    labels = ps.labels
    keep: List[Pair] = []
    for a, p in sorted(ps.e2, key=ps.instance.edge_key):
        la, lp = labels.of(a), labels.of(p)
        if (a, p) in ps.e1:
            if VertexLabel.EVEN not in (la, lp) and VertexLabel.ODD in (la, lp):
                continue
        elif la is not VertexLabel.EVEN:
            continue
        keep.append((a, p))
    return ps.g2.subgraph(keep)


def find_popular_matching(ps: PopularStructure) -> Optional[Matching]:
    """
    Return a popular matching, or None when the instance has none.

    The maximum matching of G1 is augmented inside the pruned G2; the instance
    admits a popular matching iff the result is applicant-complete.

    Args:
        ps (PopularStructure): Structure of the instance.

    Returns:
        Optional[Matching]: A popular matching or None.

    Raises:
        InvariantViolationError: If augmentation lost first-choice edges.
    """
    m = augment_to_maximum(pruned_g2(ps), ps.m1)
    if len(m) < ps.num_applicants:
        info(
            f"No popular matching: G2 matches only {len(m)} of {ps.num_applicants} applicants",
            service="popular_utils",
        )
        return None
    kept = sum(1 for pair in m if pair in ps.e1)
    if kept != ps.k1_star:
        error(f"Augmentation kept {kept} first-choice edges, expected {ps.k1_star}", service="popular_utils")
        raise InvariantViolationError(
            f"|M ∩ E1| = {kept} differs from k1* = {ps.k1_star} after augmentation"
        )
    info(f"Popular matching found with {len(m)} pairs", service="popular_utils")
    return m


def is_popular_thm1(ps: PopularStructure, m: Matching) -> bool:
    """
    Decide popularity of an applicant-complete matching: it is popular iff
    |m ∩ E1| equals k1* and m lies inside E2.

    Raises:
        InvalidMatchingError: If ``m`` is not an applicant-complete matching over E.
    """
    validate_matching(ps.instance, m, complete=True)
    first_choice = sum(1 for pair in m if pair in ps.e1)
    return first_choice == ps.k1_star and all(pair in ps.e2 for pair in m)


def mp_value(ps: PopularStructure, m: Matching) -> int:
    """
    Objective of the weighted matching problem on G2: |A|·|m ∩ E1| + |m|.

    Raises:
        InvalidMatchingError: If ``m`` leaves E2.
    """
    outside = [pair for pair in m if pair not in ps.e2]
    if outside:
        a, p = min(outside)
        raise InvalidMatchingError(f"pair ({a}, {p}) is not in E2")
    return ps.num_applicants * sum(1 for pair in m if pair in ps.e1) + len(m)

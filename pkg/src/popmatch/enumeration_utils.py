"""
Enumeration of all popular matchings.

The search branches on admissible edges: the first applicant without a forced
post either takes its next admissible edge or loses that edge for good. A
branch is explored only while the residual graph still admits an
applicant-complete matching covering every remaining required post, so each
visited node leads to at least one output and the outputs are pairwise
distinct.
"""

import os
import sys
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import info, debug
from src.popmatch.characterization_utils import Characterization
from src.popmatch.graph_utils import BipartiteGraph, augment_to_maximum, max_matching
from src.popmatch.instance_utils import Matching, Pair


@dataclass(frozen=True)
class _Node:
    forced: Tuple[Pair, ...]
    excluded: FrozenSet[Pair]


class PopularEnumerator:
    """
    Depth-first include/exclude search over Ẽ.

    Args:
        ch (Characterization): Characterization of the instance.
    """

    def __init__(self, ch: Characterization):
        self._ch = ch
        inst = ch.structure.instance
        self._applicants = inst.applicants
        self._options: Dict[str, Tuple[str, ...]] = {
            a: tuple(p for p in inst.posts_of(a) if (a, p) in ch.e_tilde) for a in inst.applicants
        }
        self._posts = inst.posts
        self.nodes_visited = 0

    def _feasible(self, node: _Node) -> bool:
        """True iff the residual graph has an applicant-complete matching covering the free required posts."""
        self.nodes_visited += 1
        used_applicants = {a for a, _ in node.forced}
        used_posts = {p for _, p in node.forced}
        left = [a for a in self._applicants if a not in used_applicants]
        right = [p for p in self._posts if p not in used_posts]
        edges = [
            (a, p)
            for a in left
            for p in self._options[a]
            if p not in used_posts and (a, p) not in node.excluded
        ]
        residual = BipartiteGraph(left, right, edges)
        required = [p for p in right if p in self._ch.p_tilde]
        if required:
            required_set = set(required)
            on_required = residual.subgraph([e for e in edges if e[1] in required_set])
            seed = max_matching(on_required)
            if len(seed) < len(required):
                return False
        else:
            seed = Matching()
        return len(augment_to_maximum(residual, seed)) == len(left)

    def _branch(self, node: _Node) -> Optional[Tuple[_Node, _Node]]:
        """Children (include, exclude) of ``node``, or None at a leaf."""
        forced_applicants = {a for a, _ in node.forced}
        used_posts = {p for _, p in node.forced}
        for a in self._applicants:
            if a in forced_applicants:
                continue
            for p in self._options[a]:
                if p not in used_posts and (a, p) not in node.excluded:
                    include = _Node(forced=node.forced + ((a, p),), excluded=node.excluded)
                    exclude = _Node(forced=node.forced, excluded=node.excluded | {(a, p)})
                    return include, exclude
            return None
        return None

    def walk(self) -> Iterator[Tuple[Pair, ...]]:
        """Yield the forced pairs of every leaf, i.e. every popular matching, in search order."""
        root = _Node(forced=(), excluded=frozenset())
        if not self._feasible(root):
            return
        stack: List[_Node] = [root]
        while stack:
            node = stack.pop()
            if len(node.forced) == len(self._applicants):
                yield node.forced
                continue
            children = self._branch(node)
            if children is None:
                continue
            include, exclude = children
            # exclude is pushed first so the include branch is explored first
            if self._feasible(exclude):
                stack.append(exclude)
            if self._feasible(include):
                stack.append(include)


def enumerate_popular(ch: Characterization, limit: Optional[int] = None) -> Iterator[Matching]:
    """
    Stream every popular matching exactly once, in a deterministic order.

    Args:
        ch (Characterization): Characterization of the instance.
        limit (Optional[int]): Stop after this many matchings.

    Yields:
        Matching: Applicant-complete matchings inside Ẽ covering P̃.
    """
    if limit is not None and limit <= 0:
        raise ValueError(f"limit must be positive, got {limit}")
    enumerator = PopularEnumerator(ch)
    emitted = 0
    for forced in enumerator.walk():
        yield Matching(forced)
        emitted += 1
        if limit is not None and emitted >= limit:
            break
    debug(
        f"Enumeration emitted {emitted} matchings after {enumerator.nodes_visited} feasibility checks",
        service="enumeration_utils",
    )


def count_popular(ch: Optional[Characterization]) -> int:
    """
    Number of popular matchings; 0 when there is no characterization.
    """
    if ch is None:
        return 0
    count = sum(1 for _ in PopularEnumerator(ch).walk())
    info(f"Counted {count} popular matchings", service="enumeration_utils")
    return count

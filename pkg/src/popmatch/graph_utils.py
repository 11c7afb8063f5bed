"""
Bipartite graph algorithms: Hopcroft-Karp maximum matching, the König minimum
vertex cover and the even/odd/unreachable labeling of a maximum matching.

Left vertices are applicants and right vertices are posts. Adjacency lists keep
input order and the algorithms never iterate over sets, so every result is a
function of the input order alone.
"""

import math
import os
import sys
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import debug
from src.popmatch.instance_utils import Matching, Pair

_UNREACHED = math.inf


class BipartiteGraph:
    """
    Immutable bipartite graph with ordered adjacency.

    Args:
        left (Sequence[str]): Left vertices (applicants).
        right (Sequence[str]): Right vertices (posts).
        edges (Iterable[Pair]): (left, right) pairs; each list keeps the order given here.

    Raises:
        ValueError: If an endpoint is undeclared or an edge is repeated.
    """

    def __init__(self, left: Sequence[str], right: Sequence[str], edges: Iterable[Pair]):
        self.left: Tuple[str, ...] = tuple(left)
        self.right: Tuple[str, ...] = tuple(right)
        left_set, right_set = set(self.left), set(self.right)
        left_adj: Dict[str, List[str]] = {u: [] for u in self.left}
        right_adj: Dict[str, List[str]] = {v: [] for v in self.right}
        seen: Set[Pair] = set()
        for u, v in edges:
            if u not in left_set or v not in right_set:
                raise ValueError(f"edge ({u}, {v}) has an undeclared endpoint")
            if (u, v) in seen:
                raise ValueError(f"parallel edge ({u}, {v})")
            seen.add((u, v))
            left_adj[u].append(v)
            right_adj[v].append(u)
        self.edges: FrozenSet[Pair] = frozenset(seen)
        self._left_adj: Dict[str, Tuple[str, ...]] = {u: tuple(vs) for u, vs in left_adj.items()}
        self._right_adj: Dict[str, Tuple[str, ...]] = {v: tuple(us) for v, us in right_adj.items()}

    def neighbors_of_left(self, u: str) -> Tuple[str, ...]:
        return self._left_adj[u]

    def neighbors_of_right(self, v: str) -> Tuple[str, ...]:
        return self._right_adj[v]

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.left + self.right

    def subgraph(self, edges: Iterable[Pair]) -> "BipartiteGraph":
        """Same vertices, only the given edges (kept in this graph's adjacency order)."""
        keep = set(edges)
        ordered = [(u, v) for u in self.left for v in self._left_adj[u] if (u, v) in keep]
        return BipartiteGraph(self.left, self.right, ordered)

    def __len__(self) -> int:
        return len(self.edges)


class HopcroftKarp:
    """
    Hopcroft-Karp on a :class:`BipartiteGraph`, optionally warm-started.

    Each phase builds BFS layers from all free left vertices, stops at the first
    layer holding a free right vertex and then augments along vertex-disjoint
    shortest paths by DFS in adjacency order. The DFS keeps an explicit stack.
    Augmenting never unmatches a vertex, so a warm start keeps every vertex it
    already matches.
    """

    def __init__(self, graph: BipartiteGraph, initial: Optional[Matching] = None):
        self._graph = graph
        self._pair_left: Dict[str, str] = {}
        self._pair_right: Dict[str, str] = {}
        self._dist: Dict[str, float] = {}
        self._limit: float = _UNREACHED
        if initial is not None:
            for u, v in initial:
                if (u, v) not in graph.edges:
                    raise ValueError(f"initial pair ({u}, {v}) is not an edge of the graph")
                self._pair_left[u] = v
                self._pair_right[v] = u

    def run(self) -> Matching:
        phases = 0
        while self._bfs():
            phases += 1
            for u in self._graph.left:
                if u not in self._pair_left:
                    self._augment_from(u)
        debug(
            f"Hopcroft-Karp finished after {phases} phases with {len(self._pair_left)} pairs",
            service="graph_utils",
        )
        return Matching(self._pair_left.items())

    def _bfs(self) -> bool:
        queue: Deque[str] = deque()
        for u in self._graph.left:
            if u not in self._pair_left:
                self._dist[u] = 0
                queue.append(u)
            else:
                self._dist[u] = _UNREACHED
        self._limit = _UNREACHED
        while queue:
            u = queue.popleft()
            if self._dist[u] >= self._limit:
                continue
            for v in self._graph.neighbors_of_left(u):
                w = self._pair_right.get(v)
                if w is None:
                    if self._limit == _UNREACHED:
                        self._limit = self._dist[u] + 1
                elif self._dist[w] == _UNREACHED:
                    self._dist[w] = self._dist[u] + 1
                    queue.append(w)
        return self._limit != _UNREACHED

    def _augment_from(self, root: str) -> bool:
        # stack[i] = (left vertex, next adjacency index); rights[i] leads from stack[i] to stack[i + 1]
        stack: List[Tuple[str, int]] = [(root, 0)]
        rights: List[str] = []
        while stack:
            u, i = stack[-1]
            adjacency = self._graph.neighbors_of_left(u)
            if i >= len(adjacency):
                self._dist[u] = _UNREACHED
                stack.pop()
                if rights:
                    rights.pop()
                continue
            stack[-1] = (u, i + 1)
            v = adjacency[i]
            w = self._pair_right.get(v)
            if w is None:
                if self._dist[u] + 1 == self._limit:
                    rights.append(v)
                    for (x, _), y in zip(stack, rights):
                        self._pair_left[x] = y
                        self._pair_right[y] = x
                    return True
            elif self._dist[w] == self._dist[u] + 1:
                rights.append(v)
                stack.append((w, 0))
        return False


def max_matching(g: BipartiteGraph) -> Matching:
    """
    Maximum-cardinality matching by Hopcroft-Karp.

    Args:
        g (BipartiteGraph): The graph.

    Returns:
        Matching: A maximum matching, identical for identical inputs.
    """
    return HopcroftKarp(g).run()


def augment_to_maximum(g: BipartiteGraph, m: Matching) -> Matching:
    """
    Grow ``m`` along augmenting paths of ``g`` until it is maximum.

    Args:
        g (BipartiteGraph): The graph.
        m (Matching): A matching of ``g``.

    Returns:
        Matching: A maximum matching of ``g`` matching every vertex ``m`` matches.
    """
    return HopcroftKarp(g, initial=m).run()


def _alternating_reach(
    roots: Iterable[str],
    forward: Mapping[str, Tuple[str, ...]],
    mate: Mapping[str, str],
) -> Set[str]:
    """Vertices reached from ``roots`` by non-matching edges out and matching edges back."""
    reached: Set[str] = set()
    queue: Deque[str] = deque()
    for r in roots:
        reached.add(r)
        queue.append(r)
    while queue:
        u = queue.popleft()
        for v in forward[u]:
            if v in reached or mate.get(u) == v:
                continue
            reached.add(v)
            back = mate.get(v)
            if back is not None and back not in reached:
                reached.add(back)
                queue.append(back)
    return reached


def min_vertex_cover(g: BipartiteGraph, m: Matching, start: str = "left") -> FrozenSet[str]:
    """
    König minimum vertex cover from a maximum matching.

    With ``start="left"`` let Z be the vertices reached from unmatched left
    vertices by alternating paths; the cover is (L minus Z) plus (R within Z).
    ``start="right"`` mirrors the construction from unmatched right vertices,
    usually producing a different minimum cover.

    Args:
        g (BipartiteGraph): The graph.
        m (Matching): A maximum matching of ``g``.
        start (str): ``"left"`` or ``"right"``.

    Returns:
        FrozenSet[str]: A vertex cover of size ``len(m)``.
    """
    mate: Dict[str, str] = {}
    for u, v in m:
        mate[u] = v
        mate[v] = u
    if start == "left":
        roots = [u for u in g.left if u not in mate]
        forward = {u: g.neighbors_of_left(u) for u in g.left}
        reached = _alternating_reach(roots, forward, mate)
        return frozenset([u for u in g.left if u not in reached] + [v for v in g.right if v in reached])
    if start == "right":
        roots = [v for v in g.right if v not in mate]
        forward = {v: g.neighbors_of_right(v) for v in g.right}
        reached = _alternating_reach(roots, forward, mate)
        return frozenset([v for v in g.right if v not in reached] + [u for u in g.left if u in reached])
    raise ValueError(f"start must be 'left' or 'right', got {start!r}")


class VertexLabel(Enum):
    EVEN = "even"
    ODD = "odd"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class EouLabels:
    """Even/odd/unreachable label of every vertex relative to a maximum matching."""

    label: Mapping[str, VertexLabel]

    def of(self, vertex: str) -> VertexLabel:
        return self.label[vertex]

    def with_label(self, wanted: VertexLabel) -> FrozenSet[str]:
        return frozenset(v for v, lab in self.label.items() if lab is wanted)

    @property
    def even(self) -> FrozenSet[str]:
        return self.with_label(VertexLabel.EVEN)

    @property
    def odd(self) -> FrozenSet[str]:
        return self.with_label(VertexLabel.ODD)

    @property
    def unreachable(self) -> FrozenSet[str]:
        return self.with_label(VertexLabel.UNREACHABLE)


def eou_classify(g: BipartiteGraph, m: Matching) -> EouLabels:
    """
    Label vertices even, odd or unreachable with respect to a maximum matching.

    The search starts at every unmatched vertex on both sides. From an even
    vertex every non-matching edge leads to an odd vertex, and from an odd vertex
    the matching edge leads to an even one. A vertex is even exactly when some
    maximum matching leaves it unmatched.

    Args:
        g (BipartiteGraph): The graph.
        m (Matching): A maximum matching of ``g``.

    Returns:
        EouLabels: The labeling.
    """
    mate: Dict[str, str] = {}
    for u, v in m:
        mate[u] = v
        mate[v] = u
    neighbors: Dict[str, Tuple[str, ...]] = {u: g.neighbors_of_left(u) for u in g.left}
    neighbors.update({v: g.neighbors_of_right(v) for v in g.right})

    label: Dict[str, VertexLabel] = {}
    queue: Deque[str] = deque()
    for v in g.vertices:
        if v not in mate:
            label[v] = VertexLabel.EVEN
            queue.append(v)
    while queue:
        u = queue.popleft()
        for w in neighbors[u]:
            if mate.get(u) == w or w in label:
                continue
            label[w] = VertexLabel.ODD
            back = mate.get(w)
            if back is not None and back not in label:
                label[back] = VertexLabel.EVEN
                queue.append(back)
    for v in g.vertices:
        label.setdefault(v, VertexLabel.UNREACHABLE)
    return EouLabels(label=label)

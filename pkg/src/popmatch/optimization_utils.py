"""
Minimum-cost popular matchings.

A popular matching is an applicant-complete matching inside Ẽ that covers P̃,
so the cheapest one solves an assignment problem with equality constraints on
the required posts. The equalities are folded into the costs: every Ẽ edge at
a required post gets a bonus C larger than any cost difference, an ordinary
min-cost assignment of all applicants is solved by successive shortest paths,
and the bonus is added back.

Costs are Python integers throughout, so the exponential weights of the rank
criteria stay exact.
"""

import heapq
import itertools
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import info, debug, error
from src.popmatch.characterization_utils import Characterization
from src.popmatch.config import CRITERIA
from src.popmatch.exceptions import (
    CostDomainError,
    InfeasibleNetworkError,
    InvariantViolationError,
    UnknownCriterionError,
)
from src.popmatch.instance_utils import Instance, Matching, Pair, RankTable, is_last_resort, parse_cost_lines
from src.popmatch.popular_utils import PopularStructure

SOURCE = ("source",)
SINK = ("sink",)
Node = Hashable


@dataclass(frozen=True)
class CostFunction:
    """Integer cost of E2 edges; unspecified edges cost 0."""

    weights: Mapping[Pair, int] = field(default_factory=dict)

    def __call__(self, pair: Pair) -> int:
        return self.weights.get(pair, 0)

    def validate(self, ps: PopularStructure) -> None:
        """
        Raises:
            CostDomainError: Naming the first pair (in canonical order) outside E2.
        """
        outside = [pair for pair in self.weights if pair not in ps.e2]
        if outside:
            inst = ps.instance
            known = [p for p in outside if inst.has_applicant(p[0]) and inst.has_post(p[1])]
            pair = min(known, key=inst.edge_key) if known else min(outside)
            raise CostDomainError(f"cost given for ({pair[0]}, {pair[1]}) which is not in E2", pair=pair)


def parse_costs(text: str, inst: Instance) -> CostFunction:
    """
    Read a cost file into a CostFunction.

    Raises:
        InstanceSyntaxError: On a malformed line or a repeated pair.
        InvalidMatchingError: On a pair that is not acceptable.
    """
    weights = parse_cost_lines(text, inst)
    debug(f"Parsed {len(weights)} edge costs", service="optimization_utils")
    return CostFunction(weights=weights)


@dataclass
class Arc:
    head: Node
    capacity: int
    cost: int
    reverse: int


class FlowNetwork:
    """
    Residual network source → applicants → posts → sink with unit capacities.

    Arcs are stored per tail in insertion order; ``reverse`` indexes the paired
    residual arc in the head's list. Arcs added with a ``label`` are reported
    in the result when they carry flow.
    """

    def __init__(self, demand: int):
        self.demand = demand
        self.arcs: Dict[Node, List[Arc]] = {SOURCE: [], SINK: []}
        self.labels: List[Tuple[Node, int, Pair]] = []

    def add_node(self, node: Node) -> None:
        self.arcs.setdefault(node, [])

    def add_arc(self, tail: Node, head: Node, cost: int, capacity: int = 1, label: Optional[Pair] = None) -> None:
        self.add_node(tail)
        self.add_node(head)
        forward = Arc(head=head, capacity=capacity, cost=cost, reverse=len(self.arcs[head]))
        backward = Arc(head=tail, capacity=0, cost=-cost, reverse=len(self.arcs[tail]))
        self.arcs[tail].append(forward)
        self.arcs[head].append(backward)
        if label is not None:
            self.labels.append((tail, len(self.arcs[tail]) - 1, label))

    def flow_on(self, tail: Node, index: int) -> int:
        arc = self.arcs[tail][index]
        return self.arcs[arc.head][arc.reverse].capacity

    @property
    def nodes(self) -> List[Node]:
        return list(self.arcs)


@dataclass(frozen=True)
class FlowResult:
    """Applicant/post pairs carrying flow and the exact total cost."""

    pairs: Tuple[Pair, ...]
    cost: int


@dataclass(frozen=True)
class OptimalMatching:
    """
    Attributes:
        matching (Matching): A minimum-cost popular matching.
        cost (int): Its cost under the user's costs.
        raw_cost (int): Optimum of the penalized assignment.
        penalty (int): Bonus C granted per required post.
    """

    matching: Matching
    cost: int
    raw_cost: int
    penalty: int


def _initial_potentials(net: FlowNetwork) -> Dict[Node, int]:
    """
    Potentials from one Bellman-Ford pass towards the sink.

    ``-dist(v, sink)`` makes every arc that can still reach the sink
    non-negative in reduced cost; on an assignment network this prices every
    applicant at minus its cheapest arc and every post at 0, which leaves each
    applicant a zero-reduced-cost arc for the warm start.
    """
    incoming: Dict[Node, List[Tuple[Node, int]]] = {node: [] for node in net.arcs}
    for tail, arcs in net.arcs.items():
        for arc in arcs:
            if arc.capacity > 0:
                incoming[arc.head].append((tail, arc.cost))

    dist: Dict[Node, int] = {SINK: 0}
    nodes = net.nodes
    for _ in range(len(nodes)):
        changed = False
        for head in nodes:
            if head not in dist:
                continue
            for tail, cost in incoming[head]:
                if tail not in dist or cost + dist[head] < dist[tail]:
                    dist[tail] = cost + dist[head]
                    changed = True
        if not changed:
            break
    else:
        raise InfeasibleNetworkError("negative cycle in the initial residual network")
    return {node: -d for node, d in dist.items()}


def _push(net: FlowNetwork, path: List[Tuple[Node, int]]) -> int:
    """Send one unit along ``path`` (tail, arc index) pairs and return its cost."""
    cost = 0
    for tail, index in path:
        arc = net.arcs[tail][index]
        arc.capacity -= 1
        net.arcs[arc.head][arc.reverse].capacity += 1
        cost += arc.cost
    return cost


def _warm_start(net: FlowNetwork, potential: Dict[Node, int]) -> Tuple[List[Tuple[Node, int]], int]:
    """
    Greedily route supplies over zero-reduced-cost arcs to free posts.

    Returns:
        Tuple[List[Tuple[Node, int]], int]: Unrouted supplies with the index of
        their source arc, in source-arc order, and the cost sent.
    """
    to_sink: Dict[Node, int] = {}
    for node, arcs in net.arcs.items():
        for index, arc in enumerate(arcs):
            if arc.head == SINK and arc.capacity > 0:
                to_sink.setdefault(node, index)
    free: List[Tuple[Node, int]] = []
    total = 0
    for s_index, s_arc in enumerate(net.arcs[SOURCE]):
        u = s_arc.head
        path = None
        if s_arc.capacity > 0 and u in potential:
            for u_index, arc in enumerate(net.arcs[u]):
                v = arc.head
                if arc.capacity <= 0 or v == SOURCE or v not in potential:
                    continue
                if arc.cost + potential[u] - potential[v] != 0:
                    continue
                sink_index = to_sink.get(v)
                if sink_index is None:
                    continue
                out = net.arcs[v][sink_index]
                if out.capacity > 0 and out.cost + potential[v] == potential[SINK]:
                    path = [(SOURCE, s_index), (u, u_index), (v, sink_index)]
                    break
        if path is None:
            free.append((u, s_index))
        else:
            total += _push(net, path)
    return free, total


def successive_shortest_paths(net: FlowNetwork) -> FlowResult:
    """
    Route one unit from every source arc to the sink at minimum total cost.

    Each applicant is a supply of one unit. After the initial potentials, a
    greedy pass routes every applicant whose cheapest arc ends at a free post;
    every applicant left over then gets one phase: Dijkstra on reduced costs
    from that applicant (never through the source) until the sink is settled,
    one unit pushed along the path, and potentials shifted by the distances,
    capped at the distance of the sink.

    Args:
        net (FlowNetwork): Unit-capacity network; ``net.demand`` equals the number of source arcs.

    Returns:
        FlowResult: Pairs with flow and the exact optimum.

    Raises:
        ValueError: If the demand differs from the number of source arcs.
        InfeasibleNetworkError: If some applicant cannot be routed.
        InvariantViolationError: If a reduced cost turns negative.
    """
    if net.demand != len(net.arcs[SOURCE]):
        raise ValueError(f"demand {net.demand} differs from the {len(net.arcs[SOURCE])} source arcs")
    potential = _initial_potentials(net)
    order = {node: i for i, node in enumerate(net.nodes)}
    free, total = _warm_start(net, potential)
    routed = net.demand - len(free)
    debug(f"Warm start routed {routed} of {net.demand} units", service="optimization_utils")

    for phase, (start, s_index) in enumerate(free):
        if start not in potential:
            error(f"Supply {start!r} has no path to the sink", service="optimization_utils")
            raise InfeasibleNetworkError(f"only {routed} of {net.demand} units can reach the sink")
        dist: Dict[Node, int] = {start: 0}
        parent: Dict[Node, Tuple[Node, int]] = {}
        done = set()
        counter = itertools.count()
        heap: List[Tuple[int, int, int, Node]] = [(0, order[start], next(counter), start)]
        while heap:
            d, _, _, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            if u == SINK:
                break
            for index, arc in enumerate(net.arcs[u]):
                if arc.capacity <= 0 or arc.head == SOURCE or arc.head in done:
                    continue
                if arc.head not in potential:
                    # cannot reach the sink
                    continue
                reduced = arc.cost + potential[u] - potential[arc.head]
                if reduced < 0:
                    raise InvariantViolationError(f"negative reduced cost {reduced} in phase {phase}")
                nd = d + reduced
                if arc.head not in dist or nd < dist[arc.head]:
                    dist[arc.head] = nd
                    parent[arc.head] = (u, index)
                    heapq.heappush(heap, (nd, order[arc.head], next(counter), arc.head))
        if SINK not in done:
            error(f"Network saturated after {routed} of {net.demand} units", service="optimization_utils")
            raise InfeasibleNetworkError(f"only {routed} of {net.demand} units can reach the sink")

        # equivalent to adding min(d(v), d(sink)) everywhere, up to a constant
        reach = dist[SINK]
        for node in done:
            potential[node] += dist[node] - reach

        path: List[Tuple[Node, int]] = []
        node = SINK
        while node != start:
            tail, index = parent[node]
            path.append((tail, index))
            node = tail
        path.append((SOURCE, s_index))
        total += _push(net, path)
        routed += 1

    pairs = tuple(label for tail, index, label in net.labels if net.flow_on(tail, index) > 0)
    debug(f"Successive shortest paths sent {net.demand} units at cost {total}", service="optimization_utils")
    return FlowResult(pairs=pairs, cost=total)


def build_network(ch: Characterization, w: CostFunction, penalty: int) -> FlowNetwork:
    """
    Network of the penalized assignment over Ẽ.

    Edges at required posts cost ``w(e) - penalty``; applicants and posts are
    added in instance order and each applicant's arcs in its preference order.
    """
    ps = ch.structure
    inst = ps.instance
    net = FlowNetwork(demand=len(inst.applicants))
    for a in inst.applicants:
        net.add_arc(SOURCE, ("applicant", a), 0)
    for a in inst.applicants:
        for p in inst.posts_of(a):
            if (a, p) in ch.e_tilde:
                cost = w((a, p)) - (penalty if p in ch.p_tilde else 0)
                net.add_arc(("applicant", a), ("post", p), cost, label=(a, p))
    for p in inst.posts:
        net.add_arc(("post", p), SINK, 0)
    return net


def min_cost_popular(ch: Characterization, w: CostFunction) -> OptimalMatching:
    """
    Cheapest popular matching under ``w``.

    Args:
        ch (Characterization): Characterization of the instance.
        w (CostFunction): Costs on E2.

    Returns:
        OptimalMatching: Matching, exact cost, penalized optimum and penalty.

    Raises:
        CostDomainError: If ``w`` prices a pair outside E2.
        InvariantViolationError: If the optimum misses a required post.
    """
    try:
        ps = ch.structure
        w.validate(ps)
        penalty = 1 + sum(abs(w(e)) for e in ch.e_tilde)
        net = build_network(ch, w, penalty)
        result = successive_shortest_paths(net)
        m = Matching(result.pairs)
        missing = [p for p in ch.p_tilde if m.applicant_of(p) is None]
        if missing:
            raise InvariantViolationError(f"penalized optimum leaves required post '{sorted(missing)[0]}' free")
        cost = result.cost + len(ch.p_tilde) * penalty
        if cost != sum(w(e) for e in m):
            raise InvariantViolationError("reported cost differs from the cost of the matching")
        info(f"Minimum-cost popular matching found with cost {cost}", service="optimization_utils")
        return OptimalMatching(matching=m, cost=cost, raw_cost=result.cost, penalty=penalty)
    except CostDomainError as exc:
        error(f"Invalid cost function: {exc}", service="optimization_utils")
        raise


def criterion_costs(
    inst: Instance,
    ps: PopularStructure,
    criterion: str,
    user_costs: Optional[CostFunction] = None,
) -> CostFunction:
    """
    Edge costs whose minimum selects a popular matching optimal for ``criterion``.

    * ``maxcard``: 1 on last-resort edges, so fewest last resorts are used.
    * ``mincost-maxcard``: C0 on last-resort edges plus the user cost, C0 = 1 + Σ|user cost|.
    * ``egalitarian``: the rank of the edge.
    * ``rankmax``: -(n+1)^(R-rank), R the largest rank in E, n = |A|+|P|.
    * ``fair``: (n+1)^(rank-1).

    Raises:
        UnknownCriterionError: For a name outside ``CRITERIA``.
    """
    if criterion not in CRITERIA:
        raise UnknownCriterionError(f"unknown criterion '{criterion}', expected one of {', '.join(CRITERIA)}")
    ranks = RankTable(inst)
    edges = sorted(ps.e2, key=inst.edge_key)
    base = len(inst.applicants) + len(inst.posts) + 1
    top = max((len(inst.prefs[a]) for a in inst.applicants), default=0)
    user = user_costs or CostFunction()
    weights: Dict[Pair, int] = {}
    if criterion == "maxcard":
        weights = {e: 1 if is_last_resort(e[1]) else 0 for e in edges}
    elif criterion == "mincost-maxcard":
        user.validate(ps)
        c0 = 1 + sum(abs(v) for v in user.weights.values())
        weights = {e: (c0 if is_last_resort(e[1]) else 0) + user(e) for e in edges}
    elif criterion == "egalitarian":
        weights = {e: ranks.rank(*e) for e in edges}
    elif criterion == "rankmax":
        weights = {e: -(base ** (top - ranks.rank(*e))) for e in edges}
    elif criterion == "fair":
        weights = {e: base ** (ranks.rank(*e) - 1) for e in edges}
    return CostFunction(weights=weights)

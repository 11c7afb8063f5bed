"""
Seeded random instances and cost files for the suite and ``popmatch gen``.
"""

import os
import random
import sys
from typing import Dict, List, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import debug
from src.popmatch.config import COST_RANGE, DEFAULT_LIST_LEN, DEFAULT_TIE_PROB
from src.popmatch.instance_utils import Instance, Pair, parse_instance
from src.popmatch.optimization_utils import CostFunction
from src.popmatch.popular_utils import PopularStructure


def generate_instance_text(
    applicants: int,
    posts: int,
    tie_prob: float = DEFAULT_TIE_PROB,
    list_len: int = DEFAULT_LIST_LEN,
    seed: int = 0,
) -> str:
    """
    Random instance file.

    Every applicant draws between 1 and ``list_len`` distinct posts (never more
    than ``posts``) in random order; each post after the first joins the
    previous tie group with probability ``tie_prob``.

    Args:
        applicants (int): Number of applicants ``a1 .. aN``.
        posts (int): Number of real posts ``p1 .. pM``.
        tie_prob (float): Probability of tying a post with its predecessor.
        list_len (int): Maximum list length.
        seed (int): Seed of the private random generator.

    Returns:
        str: Instance text; identical seeds give identical text.
    """
    if applicants < 0 or posts < 0 or list_len < 0:
        raise ValueError("sizes must be non-negative")
    if not 0.0 <= tie_prob <= 1.0:
        raise ValueError(f"tie probability must lie in [0, 1], got {tie_prob}")
    rng = random.Random(seed)
    post_ids = [f"p{j}" for j in range(1, posts + 1)]
    lines = [f"# generated: applicants={applicants} posts={posts} tie_prob={tie_prob} list_len={list_len} seed={seed}"]
    for i in range(1, applicants + 1):
        longest = min(list_len, posts)
        length = rng.randint(1, longest) if longest > 0 else 0
        chosen = rng.sample(post_ids, length)
        groups: List[List[str]] = []
        for post in chosen:
            if groups and rng.random() < tie_prob:
                groups[-1].append(post)
            else:
                groups.append([post])
        rendered = [g[0] if len(g) == 1 else "(" + " ".join(g) + ")" for g in groups]
        lines.append(f"applicant a{i} : " + " > ".join(rendered))
    debug(f"Generated instance with seed {seed}", service="generator_utils")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def generate_instance(
    applicants: int,
    posts: int,
    tie_prob: float = DEFAULT_TIE_PROB,
    list_len: int = DEFAULT_LIST_LEN,
    seed: int = 0,
) -> Instance:
    return parse_instance(generate_instance_text(applicants, posts, tie_prob, list_len, seed))


def random_costs(ps: PopularStructure, seed: int = 0, bounds: Tuple[int, int] = COST_RANGE) -> CostFunction:
    """Uniform integer cost in ``bounds`` on every E2 edge, drawn in canonical edge order."""
    rng = random.Random(seed)
    low, high = bounds
    weights: Dict[Pair, int] = {}
    for pair in sorted(ps.e2, key=ps.instance.edge_key):
        weights[pair] = rng.randint(low, high)
    return CostFunction(weights=weights)


def serialize_costs(ps: PopularStructure, w: CostFunction) -> str:
    return "".join(
        f"{a} {p} {w((a, p))}\n" for a, p in sorted(w.weights, key=ps.instance.edge_key)
    )

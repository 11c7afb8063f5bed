"""
Text and JSON rendering of command results.

JSON reports have the top-level keys ``instance``, ``result`` and
``certificate``; keys are sorted and every set is written in instance order
(applicants in input order, then posts in post order), so identical inputs
give byte-identical output.
"""

import json
import os
import sys
from typing import Any, Dict, Iterable, List, Optional

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.popmatch.characterization_utils import Characterization
from src.popmatch.instance_utils import Instance, Matching, acceptable_pairs, serialize_matching


def vertex_order(inst: Instance, vertices: Iterable[str]) -> List[str]:
    """``vertices`` sorted applicants first (input order), then posts (post order)."""
    rank = {v: i for i, v in enumerate(inst.applicants + inst.posts)}
    return sorted(vertices, key=rank.__getitem__)


def pair_list(inst: Instance, pairs: Iterable) -> List[List[str]]:
    return [[a, p] for a, p in sorted(pairs, key=inst.edge_key)]


def instance_summary(inst: Instance) -> Dict[str, int]:
    return {
        "applicants": len(inst.applicants),
        "real_posts": len(inst.real_posts),
        "acceptable_pairs": len(acceptable_pairs(inst)),
    }


def certificate_payload(inst: Instance, ch: Characterization) -> Dict[str, Any]:
    """Cover, required posts, admissible edges, dual pricing and k1* of a characterization."""
    return {
        "cover": vertex_order(inst, ch.cover),
        "required_posts": vertex_order(inst, ch.p_tilde),
        "admissible_edges": pair_list(inst, ch.e_tilde),
        "dual": {v: ch.dual[v] for v in inst.applicants + inst.posts},
        "dual_objective": ch.dual.objective,
        "k1_star": ch.k1_star,
    }


def to_json(
    inst: Optional[Instance],
    result: Any,
    certificate: Optional[Dict[str, Any]] = None,
) -> str:
    report = {
        "instance": instance_summary(inst) if inst is not None else None,
        "result": result,
        "certificate": certificate,
    }
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def matching_text(inst: Instance, m: Matching) -> str:
    return serialize_matching(inst, m)


def characterization_text(inst: Instance, ch: Characterization) -> str:
    """
    Human-readable characterization, one field per line.

    Edges are written ``a-p`` and separated by spaces; the dual vector lists
    ``vertex=price`` for every vertex in instance order.
    """
    lines = [
        f"k1*: {ch.k1_star}",
        "cover: " + " ".join(vertex_order(inst, ch.cover)),
        "required posts: " + " ".join(vertex_order(inst, ch.p_tilde)),
        "admissible edges: " + " ".join(f"{a}-{p}" for a, p in sorted(ch.e_tilde, key=inst.edge_key)),
        "dual: " + " ".join(f"{v}={ch.dual[v]}" for v in inst.applicants + inst.posts),
        f"dual objective: {ch.dual.objective}",
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def matchings_text(inst: Instance, matchings: Iterable[Matching]) -> str:
    """Matchings as numbered blocks of ``applicant post`` lines."""
    blocks = []
    for i, m in enumerate(matchings, start=1):
        blocks.append(f"# matching {i}\n" + matching_text(inst, m))
    return "".join(blocks)

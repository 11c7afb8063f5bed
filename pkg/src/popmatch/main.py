"""
Command-line front end of popmatch: one subcommand per operation, reports on stdout.
"""

import argparse
import json
import os
import sys
from typing import List, Optional

# Fix import path for development
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..")))

from src.utils import info, error
from src.popmatch.characterization_utils import characterize, characterize_or_none, is_popular_char
from src.popmatch.config import (
    CRITERIA,
    DEFAULT_LIST_LEN,
    DEFAULT_SUITE_APPLICANTS,
    DEFAULT_SUITE_POSTS,
    DEFAULT_SUITE_SIZE,
    DEFAULT_TIE_PROB,
    EXIT_GUARD,
    EXIT_INPUT_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
)
from src.popmatch.enumeration_utils import count_popular, enumerate_popular
from src.popmatch.exceptions import (
    InfeasibleNetworkError,
    InstanceTooLargeForOracleError,
    InvariantViolationError,
    NoPopularMatchingError,
    PopmatchError,
)
from src.popmatch.generator_utils import generate_instance_text, random_costs, serialize_costs
from src.popmatch.instance_utils import (
    Instance,
    complete_with_last_resorts,
    is_last_resort,
    parse_instance,
    parse_matching,
)
from src.popmatch.optimization_utils import criterion_costs, min_cost_popular, parse_costs
from src.popmatch.oracle_utils import brute_force_p1, brute_force_popular, more_popular_challenger
from src.popmatch.popular_utils import build_structure, find_popular_matching, is_popular_thm1
from src.popmatch.report_utils import (
    certificate_payload,
    characterization_text,
    matching_text,
    matchings_text,
    pair_list,
    to_json,
    vertex_order,
)
from src.popmatch.suite_utils import CHECKS, run_suite, scale_check


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def cmd_check(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    m = find_popular_matching(build_structure(inst))
    if args.json:
        result = {"exists": m is not None, "matching": pair_list(inst, m) if m is not None else None}
        sys.stdout.write(to_json(inst, result))
    else:
        sys.stdout.write(matching_text(inst, m) if m is not None else "NONE\n")
    return EXIT_OK if m is not None else EXIT_NEGATIVE


def cmd_characterize(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    ch = characterize(build_structure(inst), cover_side=args.cover_side)
    if args.json:
        sys.stdout.write(to_json(inst, {"exists": True}, certificate_payload(inst, ch)))
    else:
        sys.stdout.write(characterization_text(inst, ch))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    m = complete_with_last_resorts(inst, parse_matching(_read(args.matching), inst))
    ps = build_structure(inst)
    witness = None
    ch = None
    if args.method == "thm1":
        popular = is_popular_thm1(ps, m)
    elif args.method == "thm2":
        ch = characterize_or_none(ps)
        popular = ch is not None and is_popular_char(ch, m)
    else:
        witness = more_popular_challenger(inst, m)
        popular = witness is None

    if args.json:
        result = {
            "method": args.method,
            "matching": pair_list(inst, m),
            "popular": popular,
            "witness": pair_list(inst, witness) if witness is not None else None,
        }
        certificate = certificate_payload(inst, ch) if ch is not None else None
        sys.stdout.write(to_json(inst, result, certificate))
    else:
        sys.stdout.write("POPULAR\n" if popular else "NOT POPULAR\n")
        if witness is not None:
            sys.stdout.write("witness:\n" + matching_text(inst, witness))
    return EXIT_OK if popular else EXIT_NEGATIVE


def cmd_mincost(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    ps = build_structure(inst)
    if args.costs is None and args.criterion is None:
        raise ValueError("mincost needs --costs or --criterion")
    user = parse_costs(_read(args.costs), inst) if args.costs is not None else None
    if args.criterion is not None:
        if user is not None and args.criterion != "mincost-maxcard":
            raise ValueError("--costs combines only with --criterion mincost-maxcard")
        w = criterion_costs(inst, ps, args.criterion, user)
    else:
        w = user
        w.validate(ps)
    ch = characterize(ps)
    best = min_cost_popular(ch, w)
    if args.json:
        result = {
            "criterion": args.criterion,
            "matching": pair_list(inst, best.matching),
            "cost": best.cost,
            "raw_cost": best.raw_cost,
            "penalty": best.penalty,
            "last_resorts": sum(1 for _, p in best.matching if is_last_resort(p)),
        }
        sys.stdout.write(to_json(inst, result, certificate_payload(inst, ch)))
    else:
        sys.stdout.write(matching_text(inst, best.matching) + f"cost: {best.cost}\n")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    ps = build_structure(inst)
    if args.count:
        ch = characterize_or_none(ps)
        k = count_popular(ch)
        if args.json:
            sys.stdout.write(to_json(inst, {"count": k}))
        else:
            sys.stdout.write(f"{k}\n")
        return EXIT_OK if k else EXIT_NEGATIVE
    ch = characterize(ps)
    found = list(enumerate_popular(ch, limit=args.limit))
    if args.json:
        result = {"count": len(found), "matchings": [pair_list(inst, m) for m in found]}
        sys.stdout.write(to_json(inst, result, certificate_payload(inst, ch)))
    else:
        sys.stdout.write(matchings_text(inst, found))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    popular = sorted(
        brute_force_popular(inst),
        key=lambda m: [inst.edge_key(pair) for pair in m.canonical(inst)],
    )
    if args.json:
        result = {
            "count": len(popular),
            "matchings": [pair_list(inst, m) for m in popular],
            "p1": vertex_order(inst, brute_force_p1(inst)),
        }
        sys.stdout.write(to_json(inst, result))
    else:
        sys.stdout.write(matchings_text(inst, popular) if popular else "NONE\n")
    return EXIT_OK if popular else EXIT_NEGATIVE


def cmd_gen(args: argparse.Namespace) -> int:
    text = generate_instance_text(args.applicants, args.posts, args.tie_prob, args.list_len, args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if args.costs_out:
        ps = build_structure(parse_instance(text))
        with open(args.costs_out, "w", encoding="utf-8") as handle:
            handle.write(serialize_costs(ps, random_costs(ps, seed=args.seed)))
    return EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    if args.scale:
        report = scale_check(seed=args.seed)
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return EXIT_OK if report["within_budget"] else EXIT_NEGATIVE
    summary = run_suite(args.count, seed=args.seed, workers=args.workers, applicants=args.applicants, posts=args.posts)
    sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if all(summary.get(name, 0) == 0 for name in CHECKS) else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="popmatch",
        description="Characterize, verify, optimize and enumerate popular matchings with ties.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("check", help="Print one popular matching or NONE.")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("characterize", help="Print the cover, required posts, admissible edges and dual.")
    p.add_argument("instance")
    p.add_argument("--cover-side", choices=("left", "right"), default="left")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_characterize)

    p = sub.add_parser("verify", help="Decide whether a matching is popular.")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("--method", choices=("thm1", "thm2", "oracle"), default="thm2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("mincost", help="Minimum-cost popular matching.")
    p.add_argument("instance")
    p.add_argument("--costs", help="Cost file with '<applicant> <post> <integer>' lines.")
    p.add_argument("--criterion", choices=CRITERIA)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_mincost)

    p = sub.add_parser("enumerate", help="List every popular matching.")
    p.add_argument("instance")
    p.add_argument("--limit", type=int)
    p.add_argument("--count", action="store_true", help="Print only the number of popular matchings.")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("oracle", help="Brute-force popular matchings of a small instance.")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("gen", help="Write a seeded random instance.")
    p.add_argument("--applicants", type=int, required=True)
    p.add_argument("--posts", type=int, required=True)
    p.add_argument("--tie-prob", type=float, default=DEFAULT_TIE_PROB)
    p.add_argument("--list-len", type=int, default=DEFAULT_LIST_LEN)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--costs-out")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("suite", help=argparse.SUPPRESS)
    p.add_argument("--count", type=int, default=DEFAULT_SUITE_SIZE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--applicants", type=int, default=DEFAULT_SUITE_APPLICANTS)
    p.add_argument("--posts", type=int, default=DEFAULT_SUITE_POSTS)
    p.add_argument("--scale", action="store_true", help="Time the large-instance budgets instead.")
    p.set_defaults(handler=cmd_suite)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    info(f"Running command '{args.command}'", service="main")
    try:
        return args.handler(args)
    except NoPopularMatchingError:
        if getattr(args, "json", False):
            sys.stdout.write(to_json(None, {"exists": False}))
        else:
            sys.stdout.write("NONE\n")
        return EXIT_NEGATIVE
    except InstanceTooLargeForOracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InvariantViolationError, InfeasibleNetworkError) as exc:
        error(f"Internal failure in '{args.command}': {exc}", service="main")
        raise
    except (PopmatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

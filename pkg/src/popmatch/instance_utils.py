"""
Instance model: preference markets with ties, matchings, and their file formats.

An instance file is line oriented. Lines starting with ``#`` are comments and
every data line reads::

    applicant <id> : <group> ( '>' <group> )*

where a group is a single post id or ``(p q r)`` for a tie. The parser appends
a private last resort ``!lr:<id>`` to every list; users never write it.
"""

import os
import re
import sys
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

# Get absolute path to the root of the project
ROOT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.append(ROOT_DIR)

from src.utils import info, debug
from src.popmatch.config import LAST_RESORT_PREFIX
from src.popmatch.exceptions import (
    DuplicateApplicantError,
    DuplicatePostError,
    InstanceSyntaxError,
    InvalidMatchingError,
    ReservedIdentifierError,
)

Pair = Tuple[str, str]
TieGroup = Tuple[str, ...]

_APPLICANT_LINE = re.compile(r"^applicant\s+([^\s:()>]+)\s*:(.*)$")
_POST_ID = re.compile(r"^[^\s:()>#]+$")


def last_resort_of(applicant: str) -> str:
    """Return the identifier of ``applicant``'s last resort."""
    return f"{LAST_RESORT_PREFIX}{applicant}"


def is_last_resort(post: str) -> bool:
    return post.startswith(LAST_RESORT_PREFIX)


@dataclass(frozen=True)
class Instance:
    """
    A one-sided preference market.

    Attributes:
        applicants (Tuple[str, ...]): Applicants in input order.
        posts (Tuple[str, ...]): Real posts in order of first mention, then last resorts.
        prefs (Mapping[str, Tuple[TieGroup, ...]]): Weak-order list of every applicant;
            each tie group keeps input order and the last group is the last resort.
        last_resort (Mapping[str, str]): Applicant to its last-resort post.
    """

    applicants: Tuple[str, ...]
    posts: Tuple[str, ...]
    prefs: Mapping[str, Tuple[TieGroup, ...]]
    last_resort: Mapping[str, str]
    _applicant_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _post_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _acceptable: FrozenSet[Pair] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_applicant_index", {a: i for i, a in enumerate(self.applicants)})
        object.__setattr__(self, "_post_index", {p: i for i, p in enumerate(self.posts)})
        object.__setattr__(
            self,
            "_acceptable",
            frozenset((a, p) for a in self.applicants for group in self.prefs[a] for p in group),
        )

    def is_acceptable(self, applicant: str, post: str) -> bool:
        return (applicant, post) in self._acceptable

    @property
    def real_posts(self) -> Tuple[str, ...]:
        return tuple(p for p in self.posts if not is_last_resort(p))

    def applicant_index(self, applicant: str) -> int:
        return self._applicant_index[applicant]

    def post_index(self, post: str) -> int:
        return self._post_index[post]

    def has_applicant(self, applicant: str) -> bool:
        return applicant in self._applicant_index

    def has_post(self, post: str) -> bool:
        return post in self._post_index

    def posts_of(self, applicant: str) -> Tuple[str, ...]:
        """All posts on ``applicant``'s list, in preference order."""
        return tuple(p for group in self.prefs[applicant] for p in group)

    def edge_key(self, pair: Pair) -> Tuple[int, int]:
        """Sort key putting pairs in applicant input order, then post order."""
        return self._applicant_index[pair[0]], self._post_index[pair[1]]


class RankTable:
    """
    Dense ranks of the acceptable pairs: the top tie group has rank 1 and
    every member of a tie group shares its rank.
    """

    def __init__(self, inst: Instance):
        self._rank: Dict[Pair, int] = {}
        for a in inst.applicants:
            for r, group in enumerate(inst.prefs[a], start=1):
                for p in group:
                    self._rank[(a, p)] = r

    def rank(self, applicant: str, post: str) -> int:
        return self._rank[(applicant, post)]

    def __contains__(self, pair: Pair) -> bool:
        return pair in self._rank

    def prefers(self, applicant: str, post: str, other: str) -> bool:
        """True iff ``applicant`` strictly prefers ``post`` to ``other``."""
        return self._rank[(applicant, post)] < self._rank[(applicant, other)]


def rank_table(inst: Instance) -> RankTable:
    return RankTable(inst)


class Matching:
    """
    An immutable set of applicant/post pairs using every vertex at most once.

    Raises:
        InvalidMatchingError: If an applicant or a post occurs in two pairs.
    """

    __slots__ = ("_pairs", "_post_of", "_applicant_of")

    def __init__(self, pairs: Iterable[Pair] = ()):
        post_of: Dict[str, str] = {}
        applicant_of: Dict[str, str] = {}
        for a, p in pairs:
            if a in post_of and post_of[a] != p:
                raise InvalidMatchingError(f"applicant '{a}' is matched twice")
            if p in applicant_of and applicant_of[p] != a:
                raise InvalidMatchingError(f"post '{p}' is matched twice")
            post_of[a] = p
            applicant_of[p] = a
        self._post_of = post_of
        self._applicant_of = applicant_of
        self._pairs: FrozenSet[Pair] = frozenset(post_of.items())

    @property
    def pairs(self) -> FrozenSet[Pair]:
        return self._pairs

    def post_of(self, applicant: str) -> Optional[str]:
        return self._post_of.get(applicant)

    def applicant_of(self, post: str) -> Optional[str]:
        return self._applicant_of.get(post)

    @property
    def matched_applicants(self) -> FrozenSet[str]:
        return frozenset(self._post_of)

    @property
    def matched_posts(self) -> FrozenSet[str]:
        return frozenset(self._applicant_of)

    @property
    def matched_vertices(self) -> FrozenSet[str]:
        return self.matched_applicants | self.matched_posts

    def canonical(self, inst: Instance) -> Tuple[Pair, ...]:
        """Pairs sorted by applicant input order."""
        return tuple(sorted(self._pairs, key=inst.edge_key))

    def is_applicant_complete(self, inst: Instance) -> bool:
        return all(a in self._post_of for a in inst.applicants)

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self._pairs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Matching):
            return self._pairs == other._pairs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"Matching({sorted(self._pairs)!r})"


def _parse_group(token: str, line_no: int) -> TieGroup:
    token = token.strip()
    if not token:
        raise InstanceSyntaxError("empty preference group", line_no)
    if token.startswith("("):
        if not token.endswith(")"):
            raise InstanceSyntaxError(f"unbalanced parenthesis in '{token}'", line_no)
        members = token[1:-1].split()
        if not members:
            raise InstanceSyntaxError("empty tie group '()'", line_no)
    else:
        members = [token]
    for post in members:
        if post.startswith(LAST_RESORT_PREFIX):
            raise ReservedIdentifierError(
                f"post '{post}' uses the reserved prefix '{LAST_RESORT_PREFIX}'", line_no
            )
        if not _POST_ID.match(post):
            raise InstanceSyntaxError(f"malformed post identifier '{post}'", line_no)
    return tuple(members)


def parse_instance(text: str) -> Instance:
    """
    Parse an instance file and append the last resorts.

    Args:
        text (str): File contents.

    Returns:
        Instance: The parsed instance, applicant order and group order preserved.

    Raises:
        InstanceSyntaxError: On a malformed line (with its line number).
        DuplicateApplicantError: If an applicant is declared twice.
        DuplicatePostError: If a post occurs twice in one list.
        ReservedIdentifierError: If an identifier uses ``!lr:`` or names both sides.
    """
    applicants: List[str] = []
    prefs: Dict[str, Tuple[TieGroup, ...]] = {}
    real_posts: Dict[str, None] = {}
    declared_on: Dict[str, int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _APPLICANT_LINE.match(line)
        if match is None:
            raise InstanceSyntaxError(f"expected 'applicant <id> : <list>', got '{line}'", line_no)
        applicant, body = match.group(1), match.group(2).strip()
        if applicant.startswith(LAST_RESORT_PREFIX):
            raise ReservedIdentifierError(
                f"applicant '{applicant}' uses the reserved prefix '{LAST_RESORT_PREFIX}'", line_no
            )
        if applicant in prefs:
            raise DuplicateApplicantError(
                f"applicant '{applicant}' already declared on line {declared_on[applicant]}", line_no
            )

        groups: List[TieGroup] = []
        seen: Set[str] = set()
        if body:
            for token in body.split(">"):
                group = _parse_group(token, line_no)
                for post in group:
                    if post in seen:
                        raise DuplicatePostError(
                            f"post '{post}' appears twice in the list of '{applicant}'", line_no
                        )
                    seen.add(post)
                groups.append(group)
                for post in group:
                    real_posts.setdefault(post, None)

        groups.append((last_resort_of(applicant),))
        applicants.append(applicant)
        prefs[applicant] = tuple(groups)
        declared_on[applicant] = line_no

    clash = next((a for a in applicants if a in real_posts), None)
    if clash is not None:
        raise ReservedIdentifierError(
            f"identifier '{clash}' is used both as an applicant and as a post", declared_on[clash]
        )

    last_resort = {a: last_resort_of(a) for a in applicants}
    posts = tuple(real_posts) + tuple(last_resort[a] for a in applicants)
    inst = Instance(
        applicants=tuple(applicants),
        posts=posts,
        prefs=prefs,
        last_resort=last_resort,
    )
    debug(
        f"Parsed instance with {len(applicants)} applicants and {len(real_posts)} real posts",
        service="instance_utils",
    )
    return inst


def serialize_instance(inst: Instance) -> str:
    """
    Write ``inst`` in the instance grammar, last resorts omitted.

    Args:
        inst (Instance): Instance to write.

    Returns:
        str: Canonical file contents, newline terminated.
    """
    lines = []
    for a in inst.applicants:
        groups = [g for g in inst.prefs[a] if g != (inst.last_resort[a],)]
        rendered = [g[0] if len(g) == 1 else "(" + " ".join(g) + ")" for g in groups]
        body = " > ".join(rendered)
        lines.append(f"applicant {a} : {body}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def acceptable_pairs(inst: Instance) -> FrozenSet[Pair]:
    """All pairs (a, p) with p on a's list, last-resort pairs included."""
    return frozenset((a, p) for a in inst.applicants for p in inst.posts_of(a))


def validate_matching(inst: Instance, m: Matching, complete: bool = False) -> None:
    """
    Check that ``m`` uses acceptable pairs only and, optionally, is applicant-complete.

    Raises:
        InvalidMatchingError: On the first violation found.
    """
    for a, p in sorted(m.pairs):
        if not inst.has_applicant(a):
            raise InvalidMatchingError(f"unknown applicant '{a}'")
        if not inst.has_post(p):
            raise InvalidMatchingError(f"unknown post '{p}'")
        if not inst.is_acceptable(a, p):
            raise InvalidMatchingError(f"pair ({a}, {p}) is not acceptable")
    if complete:
        missing = [a for a in inst.applicants if m.post_of(a) is None]
        if missing:
            raise InvalidMatchingError(f"matching is not applicant-complete, unmatched: {missing[0]}")


def complete_with_last_resorts(inst: Instance, m: Matching) -> Matching:
    """
    Match every unmatched applicant to its last resort.

    Args:
        inst (Instance): The instance.
        m (Matching): A matching over the acceptable pairs.

    Returns:
        Matching: ``m`` plus one last-resort pair per applicant unmatched in ``m``.
    """
    pairs = set(m.pairs)
    for a in inst.applicants:
        if m.post_of(a) is None:
            pairs.add((a, inst.last_resort[a]))
    return Matching(pairs)


def _data_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_no, line.split()


def parse_matching(text: str, inst: Instance) -> Matching:
    """
    Parse a matching file (``<applicant> <post>`` per line) against ``inst``.

    Raises:
        InstanceSyntaxError: On a malformed line.
        InvalidMatchingError: On an unacceptable pair or a vertex used twice.
    """
    pairs: List[Pair] = []
    used_applicants: Dict[str, int] = {}
    used_posts: Dict[str, int] = {}
    for line_no, fields in _data_lines(text):
        if len(fields) != 2:
            raise InstanceSyntaxError("expected '<applicant> <post>'", line_no)
        a, p = fields
        if not inst.is_acceptable(a, p):
            raise InvalidMatchingError(f"line {line_no}: pair ({a}, {p}) is not acceptable")
        if a in used_applicants:
            raise InvalidMatchingError(f"line {line_no}: applicant '{a}' already matched on line {used_applicants[a]}")
        if p in used_posts:
            raise InvalidMatchingError(f"line {line_no}: post '{p}' already matched on line {used_posts[p]}")
        used_applicants[a] = line_no
        used_posts[p] = line_no
        pairs.append((a, p))
    info(f"Parsed matching with {len(pairs)} pairs", service="instance_utils")
    return Matching(pairs)


def serialize_matching(inst: Instance, m: Matching) -> str:
    return "".join(f"{a} {p}\n" for a, p in m.canonical(inst))


def parse_cost_lines(text: str, inst: Instance) -> Dict[Pair, int]:
    """
    Parse a cost file (``<applicant> <post> <integer>`` per line).

    Returns:
        Dict[Pair, int]: Costs keyed by acceptable pair, exact integers.

    Raises:
        InstanceSyntaxError: On a malformed line, a non-integer cost or a repeated pair.
        InvalidMatchingError: If a pair is not acceptable.
    """
    costs: Dict[Pair, int] = {}
    for line_no, fields in _data_lines(text):
        if len(fields) != 3:
            raise InstanceSyntaxError("expected '<applicant> <post> <integer>'", line_no)
        a, p, raw = fields
        try:
            value = int(raw)
        except ValueError:
            raise InstanceSyntaxError(f"cost '{raw}' is not an integer", line_no) from None
        if not inst.is_acceptable(a, p):
            raise InvalidMatchingError(f"line {line_no}: pair ({a}, {p}) is not acceptable")
        if (a, p) in costs:
            raise InstanceSyntaxError(f"cost for ({a}, {p}) given twice", line_no)
        costs[(a, p)] = value
    return costs

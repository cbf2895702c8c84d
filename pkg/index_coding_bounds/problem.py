"""Problem parsing, rendering, canonical forms and capacity profiles."""

import logging
import re
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

from .errors import InvalidCapacityProfile, MalformedClause
from .schemas import CapacityProfile, Problem
from .utils import full_mask, popcount

logger = logging.getLogger(__name__)


_CLAUSE = re.compile(r"\((\d+)\|([^()|]*)\)")
_PROBLEM = re.compile(r"^\(\d+\|[^()|]*\)([,;]\(\d+\|[^()|]*\))*$")


def parse_problem(text: str) -> Problem:
    """Parse the compact notation ``(1|-),(2|3),(3|2)``.

    Whitespace is ignored. Clauses must list receivers 1..n in order;
    ``-`` marks empty side information.

    Args:
        text: Problem text

    Returns:
        Parsed Problem

    Raises:
        MalformedClause: the text is not a sequence of (i|list) clauses
        SelfSideInformation: some i appears in A_i
        IndexOutOfRange: an index lies outside [n]
        DuplicateIndex: a clause repeats an index
    """
    compact = re.sub(r"\s+", "", text)
    if not _PROBLEM.match(compact):
        raise MalformedClause(f"not a problem in (i|list) notation: {text!r}")

    sets = []
    for expected, (index, body) in enumerate(_CLAUSE.findall(compact), start=1):
        if int(index) != expected:
            raise MalformedClause(f"clause {expected} is labelled ({index}|...)")
        if body == "-":
            sets.append([])
            continue
        parts = body.split(",")
        if not all(part.isdigit() for part in parts):
            raise MalformedClause(f"bad side-information list {body!r} in clause {expected}")
        sets.append([int(part) for part in parts])
    return Problem.from_sets(sets)


def render_problem(problem: Problem) -> str:
    """Inverse of parse_problem."""
    return problem.render()


def interfering_set(problem: Problem, i: int) -> frozenset[int]:
    """B_i: messages receiver i neither wants nor knows."""
    return problem.interfering(i)


# =============================================================================
# ISOMORPHISM
# =============================================================================

@lru_cache(maxsize=16)
def _relabel_tables(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """For every permutation: (perm, mask image table over all 2^n masks)."""
    tables = []
    for perm in permutations(range(n)):
        image = []
        for mask in range(1 << n):
            out = 0
            for i in range(n):
                if mask >> i & 1:
                    out |= 1 << perm[i]
            image.append(out)
        tables.append((perm, tuple(image)))
    return tuple(tables)


def _relabelings(masks: Sequence[int]) -> list[tuple[int, ...]]:
    """Every consistent relabeling of a side-information mask tuple."""
    n = len(masks)
    out = []
    for perm, image in _relabel_tables(n):
        new = [0] * n
        for i, m in enumerate(masks):
            new[perm[i]] = image[m]
        out.append(tuple(new))
    return out


def canonical_masks(masks: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least side-information mask tuple over all relabelings."""
    return min(_relabelings(masks))


def canonical_form(problem: Problem) -> Problem:
    """Canonical representative of the isomorphism class of a problem.

    Two problems are isomorphic (equal up to relabeling messages, with the
    induced relabeling of receivers, servers and side information) iff
    their canonical forms are equal. The order compared is the tuple
    (A_1, ..., A_n) of side-information bitmasks.
    """
    return Problem.from_masks(canonical_masks(problem.masks))


def enumerate_nonisomorphic(n: int) -> list[Problem]:
    """One representative per isomorphism class of n-message problems.

    Walks all prod_i 2^(n-1) instances, marking whole orbits as visited,
    so each class is relabeled exactly once.

    Args:
        n: Number of messages (n <= 5 is quick)

    Returns:
        Canonical representatives sorted by canonical form
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    full = full_mask(n)
    choices = [
        [m for m in range(1 << n) if m & ~(full & ~(1 << i)) == 0]
        for i in range(n)
    ]
    seen: set[tuple[int, ...]] = set()
    representatives = []
    for masks in product(*choices):
        if masks in seen:
            continue
        orbit = _relabelings(masks)
        seen.update(orbit)
        representatives.append(min(orbit))
    representatives.sort()
    logger.debug("n=%d: %d classes out of %d instances", n, len(representatives), len(seen))
    return [Problem.from_masks(m) for m in representatives]


# =============================================================================
# CAPACITIES
# =============================================================================

def uniform_capacities(n: int, c=1) -> CapacityProfile:
    """C_J = c for every nonempty J."""
    return CapacityProfile.uniform(n, c)


def centralized_capacities(n: int, c=1) -> CapacityProfile:
    """C_[n] = c and every other server silent."""
    return CapacityProfile.centralized(n, c)


def parse_capacities_file(text: str, n: int) -> CapacityProfile:
    """Parse ``J_mask=value`` lines into a capacity profile.

    Values may be integers, decimals or fractions ``a/b``. Blank lines and
    ``#`` comments are skipped; servers not listed get capacity 0.

    Args:
        text: File contents
        n: Number of messages

    Returns:
        CapacityProfile

    Raises:
        InvalidCapacityProfile: on malformed lines, duplicates, bad masks or negatives
    """
    mapping: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip().isdigit():
            raise InvalidCapacityProfile(f"line {lineno}: expected J_mask=value, got {raw!r}")
        mask = int(key)
        if mask in mapping:
            raise InvalidCapacityProfile(f"line {lineno}: server {mask} listed twice")
        try:
            mapping[mask] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidCapacityProfile(f"line {lineno}: bad capacity {value.strip()!r}") from e
    profile = CapacityProfile.from_mapping(n, mapping)
    logger.debug(
        "capacities: %d servers listed, %d active, total %s",
        len(mapping), len(profile.active_servers()), profile.total(),
    )
    return profile


def composite_rate_count(n: int) -> int:
    """Number of composite rates S_{K,J} per decoding tuple: sum_k C(n,k)(2^k - 1)."""
    return sum((1 << popcount(j)) - 1 for j in range(1, full_mask(n) + 1))

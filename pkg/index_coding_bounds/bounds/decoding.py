"""Decoding choices, decoding spaces and server groupings."""

import logging
from itertools import product
from typing import Iterable, Optional, Sequence

from ..errors import InvalidCapacityProfile, InvalidDecodingSet
from ..schemas import CapacityProfile, DecodingTuple, DeltaSpace, DeltaStrategy, Problem, ServerGrouping
from ..utils import bit, full_mask, mask_of, popcount, submasks

logger = logging.getLogger(__name__)


def decoding_choices(a: int, i: int, universe: int, strategy: DeltaStrategy = DeltaStrategy.FULL) -> list[int]:
    """Admissible decoding sets of receiver i as masks, ascending.

    Args:
        a: Side-information mask of the receiver (already restricted to universe)
        i: Receiver (1-based)
        universe: Messages available to decode from
        strategy: FULL for every D with i in D, D inside universe minus A;
            MINIMAL_AND_MAXIMAL for just {i} and universe minus A

    Returns:
        Decoding set masks
    """
    own = bit(i)
    top = universe & ~a
    if strategy == DeltaStrategy.MINIMAL_AND_MAXIMAL:
        return sorted({own, top})
    return sorted(d for d in submasks(top) if d & own)


def decoding_tuples(
    masks: Sequence[int],
    receivers: Sequence[int],
    universe: int,
    strategy: DeltaStrategy = DeltaStrategy.FULL,
) -> list[tuple[int, ...]]:
    """Product of the receivers' decoding choices in lexicographic order."""
    per_receiver = [
        decoding_choices(masks[i - 1] & universe, i, universe, strategy)
        for i in receivers
    ]
    return list(product(*per_receiver))


def full_delta_size(problem: Problem) -> int:
    """prod_i 2^(n-1-|A_i|)."""
    size = 1
    for a in problem.masks:
        size *= 1 << (problem.n - 1 - popcount(a))
    return size


def validate_tuple(problem: Problem, sets: Sequence[Iterable[int]]) -> tuple[int, ...]:
    """Check one decoding tuple and return it as masks.

    Raises:
        InvalidDecodingSet: wrong length, i missing from D_i, D_i meets A_i or leaves [n]
    """
    if len(sets) != problem.n:
        raise InvalidDecodingSet(f"expected {problem.n} decoding sets, got {len(sets)}")
    out = []
    for i, d in enumerate(sets, start=1):
        items = list(d)
        if any(j < 1 or j > problem.n for j in items):
            raise InvalidDecodingSet(f"D_{i} leaves [1,{problem.n}]")
        m = mask_of(items)
        if not m & bit(i):
            raise InvalidDecodingSet(f"D_{i} must contain {i}")
        if m & problem.masks[i - 1]:
            raise InvalidDecodingSet(f"D_{i} overlaps the side information of receiver {i}")
        out.append(m)
    return tuple(out)


def decoding_space(
    problem: Problem,
    strategy: DeltaStrategy = DeltaStrategy.FULL,
    custom: Optional[Sequence[Sequence[Iterable[int]]]] = None,
) -> DeltaSpace:
    """Build the decoding space Δ for a problem.

    Args:
        problem: Problem
        strategy: FULL, MINIMAL_AND_MAXIMAL or CUSTOM
        custom: For CUSTOM, the tuples as sequences of n decoding sets

    Returns:
        DeltaSpace in deterministic order (custom keeps the given order)

    Raises:
        InvalidDecodingSet: a custom tuple is invalid, repeated, or missing
    """
    receivers = tuple(range(1, problem.n + 1))
    if strategy == DeltaStrategy.CUSTOM:
        if not custom:
            raise InvalidDecodingSet("custom decoding space needs at least one tuple")
        tuples = []
        seen = set()
        for sets in custom:
            m = validate_tuple(problem, sets)
            if m in seen:
                raise InvalidDecodingSet(f"duplicate decoding tuple {DecodingTuple.from_masks(m).render()}")
            seen.add(m)
            tuples.append(m)
    else:
        tuples = decoding_tuples(problem.masks, receivers, problem.full, strategy)
    return delta_from_masks(strategy, receivers, tuples)


def delta_from_masks(strategy: DeltaStrategy, receivers: Sequence[int], tuples: Iterable[Sequence[int]]) -> DeltaSpace:
    return DeltaSpace(
        strategy=strategy,
        receivers=tuple(receivers),
        tuples=tuple(DecodingTuple.from_masks(t) for t in tuples),
    )


def default_strategy(problem: Problem, full_max_n: int) -> DeltaStrategy:
    """FULL up to full_max_n messages, MINIMAL_AND_MAXIMAL beyond."""
    return DeltaStrategy.FULL if problem.n <= full_max_n else DeltaStrategy.MINIMAL_AND_MAXIMAL


def parse_delta_file(text: str, problem: Problem) -> DeltaSpace:
    """Parse a custom decoding space, one tuple per line.

    Receivers are separated by ``;`` and each D_i is a comma-separated
    list of 1-based indices, e.g. ``1,2;2;3;4``. Blank lines and ``#``
    comments are skipped.

    Raises:
        InvalidDecodingSet: malformed lines or invalid tuples
    """
    custom = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sets = []
        for field in line.split(";"):
            parts = [p.strip() for p in field.split(",") if p.strip()]
            if not parts or not all(p.isdigit() for p in parts):
                raise InvalidDecodingSet(f"line {lineno}: bad decoding set {field.strip()!r}")
            sets.append([int(p) for p in parts])
        custom.append(sets)
    return decoding_space(problem, DeltaStrategy.CUSTOM, custom)


# =============================================================================
# SERVER GROUPINGS
# =============================================================================

def all_server_grouping(caps: CapacityProfile) -> ServerGrouping:
    """One group holding every server with positive capacity."""
    active = caps.active_servers()
    if not active:
        raise InvalidCapacityProfile("all capacities are zero")
    return ServerGrouping(groups=(frozenset(active),))


def singleton_split_grouping(caps: CapacityProfile) -> ServerGrouping:
    """Each single-message server alone, all other active servers together."""
    active = caps.active_servers()
    if not active:
        raise InvalidCapacityProfile("all capacities are zero")
    singles = [frozenset({j}) for j in active if popcount(j) == 1]
    rest = frozenset(j for j in active if popcount(j) > 1)
    groups = singles + ([rest] if rest else [])
    return ServerGrouping(groups=tuple(groups))


def check_grouping(grouping: ServerGrouping, n: int) -> None:
    top = full_mask(n)
    for g in grouping.groups:
        if any(j > top for j in g):
            raise InvalidCapacityProfile(f"server group {sorted(g)} has masks outside [1,{top}]")


def parse_groups_file(text: str, n: int) -> ServerGrouping:
    """Parse server groups, one group per line as server masks.

    Masks are separated by commas or whitespace, e.g. ``3 6`` is the
    group of servers {1,2} and {2,3}.

    Raises:
        InvalidCapacityProfile: malformed lines or masks outside [1, 2^n - 1]
    """
    groups = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        parts = line.split()
        if not all(p.isdigit() and int(p) >= 1 for p in parts):
            raise InvalidCapacityProfile(f"line {lineno}: expected server masks, got {raw!r}")
        groups.append(frozenset(int(p) for p in parts))
    if not groups:
        raise InvalidCapacityProfile("groups file lists no groups")
    grouping = ServerGrouping(groups=tuple(groups))
    check_grouping(grouping, n)
    return grouping


def group_universe(group: Iterable[int]) -> int:
    """I(P) as a mask."""
    return ServerGrouping.messages(group)

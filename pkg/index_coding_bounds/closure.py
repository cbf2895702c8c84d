"""Decodability closure and the sets U, V used by the closure-based outer bound.

Every zero-entropy question H(X_W | Y_N, X_S) = 0 is answered from the
exact decoding conditions H(X_i | Y_N, X(A_i)) = 0 alone: once all of
A_i is known, message i is known too.
"""

from typing import Iterable, Sequence

from .schemas import ClosureResult, Problem
from .utils import full_mask, is_subset, mask_of, members, popcount, submasks, submasks_of_size


def closure_mask(masks: Sequence[int], seed: int) -> tuple[int, list[int]]:
    """Fixed point of "add i whenever A_i is known" on raw masks.

    Args:
        masks: Side-information masks A_1..A_n
        seed: Initially known messages

    Returns:
        (known mask, 1-based messages in the order they were added)
    """
    known = seed
    order: list[int] = []
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(masks):
            b = 1 << i
            if not known & b and a & ~known == 0:
                known |= b
                order.append(i + 1)
                changed = True
    return known, order


def closure(problem: Problem, seed: Iterable[int] = ()) -> ClosureResult:
    """Smallest superset of the seed closed under the decoding conditions.

    Scans receivers in ascending order on every pass, so ``order`` is
    deterministic.
    """
    seed_set = frozenset(seed)
    known, order = closure_mask(problem.masks, mask_of(seed_set))
    return ClosureResult(seed=seed_set, known=frozenset(members(known)), order=tuple(order))


def compute_u_mask(masks: Sequence[int]) -> int:
    known, _ = closure_mask(masks, 0)
    return known


def compute_U(problem: Problem) -> frozenset[int]:
    """Largest U with H(X_U | Y_N) = 0."""
    return frozenset(members(compute_u_mask(problem.masks)))


def v_candidate_masks(masks: Sequence[int], u: int) -> list[int]:
    """All minimum-cardinality V outside U whose knowledge unlocks every message."""
    full = full_mask(len(masks))
    if u == full:
        return [0]
    rest = full & ~u
    for size in range(1, popcount(rest) + 1):
        found = [
            v for v in submasks_of_size(rest, size)
            if closure_mask(masks, u | v)[0] == full
        ]
        if found:
            return found
    return []


def compute_V_candidates(problem: Problem, U: Iterable[int]) -> list[frozenset[int]]:
    """Smallest sets V (by cardinality) with H(X_rest | Y_N, X_UV) = 0.

    "Smallest" is read as minimum cardinality; every set of that size is
    returned, in lexicographic order of members.

    Args:
        problem: Problem
        U: The set from compute_U

    Returns:
        Candidate V sets; ``[frozenset()]`` when U = [n]
    """
    found = v_candidate_masks(problem.masks, mask_of(U))
    return [frozenset(members(v)) for v in found]


def inclusion_minimal_v_masks(masks: Sequence[int], u: int) -> list[int]:
    """Inclusion-minimal V outside U that unlock every message, ascending by mask."""
    full = full_mask(len(masks))
    rest = full & ~u

    def unlocks(v: int) -> bool:
        return closure_mask(masks, u | v)[0] == full

    out = []
    for v in sorted(submasks(rest, include_empty=True)):
        if not unlocks(v):
            continue
        # closure is monotone, so single-element removals decide minimality
        if all(not unlocks(v & ~(1 << i)) for i in range(len(masks)) if v >> i & 1):
            out.append(v)
    return out


def compare_v_notions(problem: Problem) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Both readings of "smallest V": (minimum cardinality, inclusion-minimal)."""
    masks = problem.masks
    u = compute_u_mask(masks)
    by_size = v_candidate_masks(masks, u)
    by_inclusion = inclusion_minimal_v_masks(masks, u)
    return (
        [frozenset(members(v)) for v in by_size],
        [frozenset(members(v)) for v in by_inclusion],
    )


def v_notions_differ(problem: Problem) -> bool:
    by_size, by_inclusion = compare_v_notions(problem)
    return set(by_size) != set(by_inclusion)


def condition1_mask(masks: Sequence[int], v: int) -> bool:
    full = full_mask(len(masks))
    return closure_mask(masks, full & ~v)[0] == full


def check_condition1(problem: Problem, V: Iterable[int]) -> bool:
    """True iff H(X_V | Y_N, X_rest) = 0, i.e. V is decodable once everything else is known."""
    return condition1_mask(problem.masks, mask_of(V))


def is_closed(masks: Sequence[int], known: int) -> bool:
    """No receiver outside ``known`` has its side information inside it."""
    return all(
        known >> i & 1 or not is_subset(a, known)
        for i, a in enumerate(masks)
    )

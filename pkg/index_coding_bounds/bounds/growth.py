"""Greedy growth of a decoding space."""

import logging
from typing import Callable, Optional

from ..config import GROW_MAX_CANDIDATES, GROW_MAX_ROUNDS, GROW_MIN_GAIN
from ..schemas import DeltaSpace, InnerBoundResult, Problem
from .decoding import decoding_choices, delta_from_masks

logger = logging.getLogger(__name__)


def _neighbours(
    problem: Problem,
    receivers: tuple[int, ...],
    used: list[tuple[int, ...]],
    present: set[tuple[int, ...]],
    limit: int,
) -> list[tuple[int, ...]]:
    """Tuples one decoding-set change away from a used tuple.

    Candidates are collected per changed receiver and interleaved, so a
    small limit still tries changes at every receiver.
    """
    choices = [decoding_choices(problem.masks[i - 1], i, problem.full) for i in receivers]
    queues: list[list[tuple[int, ...]]] = [[] for _ in receivers]
    queued = set()
    for tup in used:
        for pos, options in enumerate(choices):
            for d in options:
                if d == tup[pos]:
                    continue
                cand = tup[:pos] + (d,) + tup[pos + 1:]
                if cand in present or cand in queued:
                    continue
                queued.add(cand)
                queues[pos].append(cand)

    out = []
    depth = 0
    while len(out) < limit and any(depth < len(q) for q in queues):
        for q in queues:
            if depth < len(q) and len(out) < limit:
                out.append(q[depth])
        depth += 1
    return out


def grow_delta(
    problem: Problem,
    evaluate: Callable[[DeltaSpace], InnerBoundResult],
    start: DeltaSpace,
    rounds: Optional[int] = None,
    candidates: Optional[int] = None,
    min_gain: Optional[float] = None,
    usage_tol: float = 1e-9,
) -> tuple[InnerBoundResult, DeltaSpace]:
    """Add decoding tuples one at a time while the optimum improves.

    Each round tries the neighbours of the tuples the current optimum
    uses and keeps the one with the largest gain.

    Args:
        problem: Problem
        evaluate: Solves a scheme on a decoding space
        start: Initial decoding space
        rounds: Maximum number of tuples to add
        candidates: Maximum neighbours tried per round
        min_gain: Stop once the best gain is at most this
        usage_tol: Tuples with usage above this count as used

    Returns:
        (best result, decoding space it was computed on)
    """
    rounds = GROW_MAX_ROUNDS if rounds is None else rounds
    candidates = GROW_MAX_CANDIDATES if candidates is None else candidates
    min_gain = GROW_MIN_GAIN if min_gain is None else min_gain

    tuples = start.mask_tuples()
    present = set(tuples)
    result = evaluate(start)
    delta = start
    logger.info("grow: start |Δ|=%d value=%.6f", len(tuples), result.value)

    for r in range(1, rounds + 1):
        used = [t for t, u in zip(tuples, result.tuple_usage) if u > usage_tol] or tuples
        pool = _neighbours(problem, start.receivers, used, present, candidates)
        if not pool:
            logger.info("grow: no candidates left after %d rounds", r - 1)
            break

        best_result, best_tuple = None, None
        for cand in pool:
            trial = evaluate(delta_from_masks(start.strategy, start.receivers, tuples + [cand]))
            if best_result is None or trial.value > best_result.value:
                best_result, best_tuple = trial, cand

        gain = best_result.value - result.value
        if gain <= min_gain:
            logger.info("grow: round %d best gain %.2e, stopping", r, gain)
            break
        tuples.append(best_tuple)
        present.add(best_tuple)
        result = best_result
        delta = delta_from_masks(start.strategy, start.receivers, tuples)
        logger.info("grow: round %d |Δ|=%d value=%.6f (+%.2e)", r, len(tuples), result.value, gain)

    descriptor = result.delta_used.model_copy(update={"grown": True, "size": len(tuples)})
    return result.model_copy(update={"delta_used": descriptor}), delta

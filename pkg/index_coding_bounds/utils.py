"""Bitmask helpers and value formatting.

Message i (1-based) is bit i-1 of a mask. A server J is identified with
its mask, so server index = mask value and the 2^n - 1 servers are the
masks 1 .. 2^n - 1.
"""

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .config import RATIONAL_MAX_DEN
from .lp.solver import rationalize


def bit(i: int) -> int:
    """Mask of the single message i (1-based)."""
    return 1 << (i - 1)


def full_mask(n: int) -> int:
    """Mask of [n]."""
    return (1 << n) - 1


def mask_of(indices: Iterable[int]) -> int:
    """Convert 1-based indices into a mask."""
    mask = 0
    for i in indices:
        mask |= bit(i)
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Ascending 1-based indices contained in a mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_subset(a: int, b: int) -> bool:
    """True iff mask a is contained in mask b."""
    return a & ~b == 0


def submasks(mask: int, include_empty: bool = False) -> Iterator[int]:
    """Yield every submask of mask in decreasing order.

    Args:
        mask: Ground set
        include_empty: Also yield 0 at the end

    Yields:
        Submasks of ``mask``
    """
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask
    if include_empty:
        yield 0


def submasks_of_size(mask: int, size: int) -> Iterator[int]:
    """Yield submasks with exactly ``size`` members, lexicographically by members."""
    for combo in combinations(members(mask), size):
        yield mask_of(combo)


def format_set(mask: int) -> str:
    """Render a mask as ``{1,2}`` (``{}`` when empty)."""
    return "{" + ",".join(str(i) for i in members(mask)) + "}"


def format_fraction(value: Optional[Fraction]) -> str:
    if value is None:
        return "-"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_value(value: Optional[float], rational: Optional[Fraction] = None) -> str:
    """Format a float with 6 decimals plus its small-denominator rational.

    Args:
        value: Float value (None renders as "-")
        rational: Pre-computed rational; reconstructed when omitted

    Returns:
        e.g. ``18.666667 (56/3)`` or ``0.298700``
    """
    if value is None:
        return "-"
    if rational is None:
        rational = rationalize(value, RATIONAL_MAX_DEN)
    if rational is None:
        return f"{value:.6f}"
    return f"{value:.6f} ({format_fraction(rational)})"

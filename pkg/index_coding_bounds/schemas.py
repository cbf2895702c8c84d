"""Pydantic schemas for distributed index coding problems and bound results."""

from enum import Enum
from fractions import Fraction
from typing import Annotated, Iterable, Iterator, Mapping, Optional, Sequence

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    model_validator,
)

from .errors import (
    DuplicateIndex,
    IndexOutOfRange,
    InvalidCapacityProfile,
    SelfSideInformation,
)
from .utils import format_fraction, full_mask, mask_of, members


def _to_fraction(value) -> Fraction:
    """Coerce ints, decimal strings, "a/b" strings and floats to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot interpret {value!r} as a rational")


# Exact rational stored as Fraction, serialized to JSON as "a/b"
Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(format_fraction, return_type=str, when_used="json"),
]


class TableClass(str, Enum):
    """Typesetting class of a problem in the reference table (which argument closed it)."""
    NORMAL = "normal"
    BOLD = "bold"
    UNDERLINED = "underlined"
    DOUBLE_UNDERLINED = "double_underlined"
    OVERLINED = "overlined"
    OPEN_STAR = "open_star"


class DeltaStrategy(str, Enum):
    """How the decoding space is built."""
    FULL = "full"
    MINIMAL_AND_MAXIMAL = "minimal_and_maximal"
    CUSTOM = "custom"


class Scheme(str, Enum):
    """Composite coding schemes exposed by the inner-bound dispatcher."""
    CC = "cc"
    CC_ENHANCED = "cc-enhanced"
    DIST = "dist"
    DIST_NONENHANCED = "dist-nonenhanced"
    FRACTIONAL = "fractional"


class ObjectiveKind(str, Enum):
    SUM_RATE = "sum_rate"
    SYMMETRIC_RATE = "symmetric_rate"
    WEIGHTED = "weighted"


class Classification(str, Enum):
    """Outcome of comparing the inner bound with the best outer bound."""
    SUM_CAPACITY_ESTABLISHED = "sum_capacity_established"
    GAP = "gap"
    OPEN = "open"


# =============================================================================
# PROBLEM MODEL
# =============================================================================

class Problem(BaseModel):
    """A distributed index coding instance (i|A_i), i in [n].

    Indices are 1-based. Server J ranges over all nonempty subsets of [n];
    capacities live in a separate CapacityProfile.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Number of messages / receivers")
    side_info: tuple[frozenset[int], ...] = Field(description="side_info[i-1] = A_i")

    @model_validator(mode="after")
    def _check_side_info(self) -> "Problem":
        if len(self.side_info) != self.n:
            raise ValueError(f"expected {self.n} side-information sets, got {len(self.side_info)}")
        for i, a in enumerate(self.side_info, start=1):
            if i in a:
                raise ValueError(f"receiver {i} lists itself as side information")
            if any(j < 1 or j > self.n for j in a):
                raise ValueError(f"side information of receiver {i} leaves [1,{self.n}]")
        return self

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]]) -> "Problem":
        """Build a problem, raising the typed parse errors on bad input.

        Args:
            sets: A_1, ..., A_n as iterables of 1-based indices

        Returns:
            Validated Problem
        """
        n = len(sets)
        if n < 1:
            raise IndexOutOfRange("a problem needs at least one message")
        frozen = []
        for i, a in enumerate(sets, start=1):
            items = list(a)
            if len(set(items)) != len(items):
                raise DuplicateIndex(f"receiver {i} repeats a side-information index")
            for j in items:
                if j < 1 or j > n:
                    raise IndexOutOfRange(f"index {j} in A_{i} is outside [1,{n}]")
            if i in items:
                raise SelfSideInformation(f"receiver {i} cannot know its own message")
            frozen.append(frozenset(items))
        return cls(n=n, side_info=tuple(frozen))

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Problem":
        return cls.from_sets([members(m) for m in masks])

    @property
    def masks(self) -> tuple[int, ...]:
        """Side-information bitmasks, one per receiver."""
        return tuple(mask_of(a) for a in self.side_info)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def interfering(self, i: int) -> frozenset[int]:
        """B_i = [n] minus (A_i and i): messages receiver i neither wants nor knows."""
        return frozenset(range(1, self.n + 1)) - self.side_info[i - 1] - {i}

    def relabel(self, perm: Sequence[int]) -> "Problem":
        """Apply a message relabeling; perm[i-1] is the new label of message i."""
        if sorted(perm) != list(range(1, self.n + 1)):
            raise ValueError(f"{perm!r} is not a permutation of [1,{self.n}]")
        new_sets: list[frozenset[int]] = [frozenset()] * self.n
        for i, a in enumerate(self.side_info, start=1):
            new_sets[perm[i - 1] - 1] = frozenset(perm[j - 1] for j in a)
        return Problem(n=self.n, side_info=tuple(new_sets))

    def render(self) -> str:
        """Compact text form, e.g. ``(1|-),(2|3),(3|2)``."""
        clauses = []
        for i, a in enumerate(self.side_info, start=1):
            body = ",".join(str(j) for j in sorted(a)) or "-"
            clauses.append(f"({i}|{body})")
        return ",".join(clauses)

    def __str__(self) -> str:
        return self.render()


class CapacityProfile(BaseModel):
    """Link capacity C_J of every server J, indexed by server mask."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    capacities: tuple[Rational, ...] = Field(description="capacities[J-1] = C_J")

    @model_validator(mode="after")
    def _check_shape(self) -> "CapacityProfile":
        expected = full_mask(self.n)
        if len(self.capacities) != expected:
            raise ValueError(f"expected {expected} capacities, got {len(self.capacities)}")
        if any(c < 0 for c in self.capacities):
            raise ValueError("capacities must be nonnegative")
        return self

    @classmethod
    def uniform(cls, n: int, c) -> "CapacityProfile":
        """C_J = c for every nonempty J."""
        return cls.from_mapping(n, {mask: c for mask in range(1, full_mask(n) + 1)})

    @classmethod
    def centralized(cls, n: int, c) -> "CapacityProfile":
        """Single server holding everything: C_[n] = c, all other C_J = 0."""
        return cls.from_mapping(n, {full_mask(n): c})

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, object]) -> "CapacityProfile":
        """Build from {server mask: capacity}; missing servers get 0.

        Raises:
            InvalidCapacityProfile: on masks outside [1, 2^n - 1] or negative values
        """
        if n < 1:
            raise InvalidCapacityProfile("n must be at least 1")
        top = full_mask(n)
        values = [Fraction(0)] * top
        for mask, raw in mapping.items():
            if not 1 <= mask <= top:
                raise InvalidCapacityProfile(f"server mask {mask} outside [1,{top}]")
            try:
                value = _to_fraction(raw)
            except (ValueError, ZeroDivisionError) as e:
                raise InvalidCapacityProfile(f"capacity {raw!r} of server {mask}: {e}") from e
            if value < 0:
                raise InvalidCapacityProfile(f"capacity of server {mask} is negative")
            values[mask - 1] = value
        return cls(n=n, capacities=tuple(values))

    def capacity(self, mask: int) -> Fraction:
        return self.capacities[mask - 1]

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for mask, c in enumerate(self.capacities, start=1):
            yield mask, c

    def total(self) -> Fraction:
        return sum(self.capacities, Fraction(0))

    def active_servers(self) -> tuple[int, ...]:
        """Masks of servers with C_J > 0."""
        return tuple(mask for mask, c in self.items() if c > 0)

    def scaled(self, alpha) -> "CapacityProfile":
        factor = _to_fraction(alpha)
        return CapacityProfile(n=self.n, capacities=tuple(c * factor for c in self.capacities))


class CatalogEntry(BaseModel):
    """One catalog problem together with its reference row."""
    model_config = ConfigDict(frozen=True)

    problem_no: int = Field(ge=1)
    problem: Problem
    table_sum_rate: Rational
    table_class: TableClass


# =============================================================================
# DECODABILITY
# =============================================================================

class ClosureResult(BaseModel):
    """Fixed point of "add i whenever A_i is known" started from a seed."""
    model_config = ConfigDict(frozen=True)

    seed: frozenset[int]
    known: frozenset[int]
    order: tuple[int, ...] = Field(description="Messages in the order they were added")


# =============================================================================
# INNER BOUNDS
# =============================================================================

class DecodingTuple(BaseModel):
    """One decoding set per receiver of a DeltaSpace, aligned with its receivers."""
    model_config = ConfigDict(frozen=True)

    sets: tuple[frozenset[int], ...]

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(d) for d in self.sets)

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "DecodingTuple":
        return cls(sets=tuple(frozenset(members(m)) for m in masks))

    def render(self) -> str:
        """``1,2;2;3;4`` style text (the delta-file line format)."""
        return ";".join(",".join(str(j) for j in sorted(d)) for d in self.sets)


class DeltaSpace(BaseModel):
    """Ordered, duplicate-free list of decoding tuples."""
    model_config = ConfigDict(frozen=True)

    strategy: DeltaStrategy
    receivers: tuple[int, ...] = Field(description="Receivers the tuple entries refer to")
    tuples: tuple[DecodingTuple, ...]

    @model_validator(mode="after")
    def _check_tuples(self) -> "DeltaSpace":
        if not self.tuples:
            raise ValueError("a decoding space needs at least one tuple")
        seen = set()
        for t in self.tuples:
            if len(t.sets) != len(self.receivers):
                raise ValueError("decoding tuple does not match the receiver list")
            for i, d in zip(self.receivers, t.sets):
                if i not in d:
                    raise ValueError(f"decoding set of receiver {i} must contain {i}")
            if t.sets in seen:
                raise ValueError(f"duplicate decoding tuple {t.render()}")
            seen.add(t.sets)
        return self

    @property
    def size(self) -> int:
        return len(self.tuples)

    def mask_tuples(self) -> list[tuple[int, ...]]:
        return [t.masks for t in self.tuples]


class DeltaDescriptor(BaseModel):
    """What decoding space an inner bound was computed on."""
    strategy: DeltaStrategy
    size: int
    grown: bool = False


class ServerGrouping(BaseModel):
    """Groups P of servers for fractional composite coding (groups may overlap)."""
    model_config = ConfigDict(frozen=True)

    groups: tuple[frozenset[int], ...] = Field(description="Each group is a set of server masks")

    @model_validator(mode="after")
    def _check_groups(self) -> "ServerGrouping":
        if not self.groups:
            raise ValueError("grouping needs at least one group")
        for g in self.groups:
            if not g:
                raise ValueError("server groups must be nonempty")
            if any(mask < 1 for mask in g):
                raise ValueError("server masks start at 1")
        return self

    @staticmethod
    def messages(group: Iterable[int]) -> int:
        """I(P): mask of messages held by at least one server of the group."""
        union = 0
        for mask in group:
            union |= mask
        return union


class Objective(BaseModel):
    """Linear objective over message rates."""
    model_config = ConfigDict(frozen=True)

    kind: ObjectiveKind = ObjectiveKind.SUM_RATE
    weights: Optional[tuple[float, ...]] = None

    @model_validator(mode="after")
    def _check_weights(self) -> "Objective":
        if self.kind == ObjectiveKind.WEIGHTED:
            if not self.weights:
                raise ValueError("weighted objective needs weights")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be nonnegative")
        return self

    @classmethod
    def sum_rate(cls) -> "Objective":
        return cls(kind=ObjectiveKind.SUM_RATE)

    @classmethod
    def symmetric(cls) -> "Objective":
        return cls(kind=ObjectiveKind.SYMMETRIC_RATE)

    @classmethod
    def weighted(cls, weights: Sequence[float]) -> "Objective":
        return cls(kind=ObjectiveKind.WEIGHTED, weights=tuple(weights))

    def weight(self, i: int) -> float:
        """Coefficient of R_i for linear objectives."""
        if self.kind == ObjectiveKind.WEIGHTED:
            return self.weights[i - 1]
        return 1.0


class InnerBoundResult(BaseModel):
    """Optimum of one composite coding LP."""
    scheme: Scheme
    objective: Objective
    value: float
    rational_value: Optional[Rational] = None
    rates: tuple[float, ...] = Field(description="R_i per message")
    delta_used: DeltaDescriptor
    lp_variables: int = 0
    lp_constraints: int = 0
    lp_nonzeros: int = 0
    solve_seconds: float = 0.0
    tuple_usage: tuple[float, ...] = Field(
        default=(),
        description="Per-tuple weight (sum of split rates, or hull weight) in delta order",
    )


# =============================================================================
# OUTER BOUNDS
# =============================================================================

class Thm2Bound(BaseModel):
    """Closure-based sum-rate bound with its witness sets."""
    value: Rational
    u: tuple[int, ...]
    v: tuple[int, ...]


class OuterBoundResult(BaseModel):
    """Polymatroidal bound, closure bound and their minimum."""
    thm1_value: float
    thm2_value: Optional[Rational] = None
    best: float
    thm2_witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = Field(
        default=None, description="(U, V) attaining thm2_value"
    )
    grounding: str = "union"


# =============================================================================
# REPORTS
# =============================================================================

class BoundReport(BaseModel):
    """Inner/outer comparison for one problem."""
    problem_no: Optional[int] = None
    problem_text: str
    inner: Optional[float] = None
    inner_rational: Optional[Rational] = None
    inner_nonenhanced: Optional[float] = None
    thm1: Optional[float] = None
    thm2: Optional[Rational] = None
    thm2_witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    best_outer: Optional[float] = None
    classification: Classification = Classification.OPEN
    table_expected: Optional[Rational] = None
    table_class: Optional[TableClass] = None
    table_match: Optional[bool] = None
    v_notions_differ: bool = False
    delta_size: Optional[int] = None
    seconds: float = 0.0
    error: Optional[str] = None


class TableSummary(BaseModel):
    """Aggregate counts of a catalog sweep."""
    total: int
    thm1_matches: int
    thm2_rescues: int
    established: int
    gaps: list[int] = Field(default_factory=list)
    gap_classes: dict[str, int] = Field(default_factory=dict)
    failures: list[int] = Field(default_factory=list)
    table_mismatches: list[int] = Field(default_factory=list)
    enhancement_separations: Optional[list[int]] = None
    v_notion_differences: list[int] = Field(default_factory=list)
    grounding: str = "union"


class TableReport(BaseModel):
    """Everything `table` emits; JSON output parses back into this model."""
    reports: list[BoundReport]
    summary: TableSummary

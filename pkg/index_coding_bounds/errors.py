"""Exception types for index coding bound computations."""

from typing import Optional


class IndexCodingError(Exception):
    """Base class for all errors raised by this package."""


class ProblemParseError(IndexCodingError, ValueError):
    """Problem text or side-information sets are invalid."""


class MalformedClause(ProblemParseError):
    """A clause is not of the form (i|list) or receivers are out of order."""


class SelfSideInformation(ProblemParseError):
    """Receiver i lists its own message as side information."""


class IndexOutOfRange(ProblemParseError):
    """A message index lies outside [n]."""


class DuplicateIndex(ProblemParseError):
    """A side-information list repeats an index."""


class CatalogCorrupt(IndexCodingError):
    """Bundled catalog data fails its checksum or shape checks."""


class InvalidDecodingSet(IndexCodingError, ValueError):
    """A decoding set misses its own receiver or overlaps side information."""


class InvalidCapacityProfile(IndexCodingError, ValueError):
    """Capacity profile has the wrong shape or negative entries."""


class NumericalFailure(IndexCodingError):
    """The LP solver did not reach a definite status."""

    def __init__(self, message: str, status: Optional[int] = None):
        super().__init__(message)
        self.status = status


class DeltaTooLarge(IndexCodingError):
    """The LP for the chosen decoding space exceeds the nonzero cap."""

    def __init__(self, nonzeros: int, cap: int):
        super().__init__(
            f"LP would need about {nonzeros:,} nonzeros, cap is {cap:,} "
            f"(raise IC_MAX_NONZEROS or use a smaller decoding space)"
        )
        self.nonzeros = nonzeros
        self.cap = cap

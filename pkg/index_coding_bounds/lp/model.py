"""Sparse LP modeling layer: a mutable builder and the frozen program it produces."""

from array import array
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DeltaTooLarge

Coefficients = Union[Mapping[int, float], Iterable[tuple[int, float]]]


class ConstraintSense(str, Enum):
    LE = "<="
    EQ = "="


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LinearProgram(BaseModel):
    """Immutable sparse LP: maximize (or minimize) c.x s.t. rows, bounds.

    Rows are stored as COO triplets; ``row_is_eq`` marks equality rows,
    all others are ``<=``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = "lp"
    variable_names: tuple[str, ...]
    lower: np.ndarray
    upper: np.ndarray
    objective: np.ndarray
    maximize: bool = True
    row_names: tuple[str, ...] = ()
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    row_is_eq: np.ndarray
    rhs: np.ndarray

    @property
    def num_variables(self) -> int:
        return len(self.variable_names)

    @property
    def num_constraints(self) -> int:
        return len(self.rhs)

    @property
    def nonzeros(self) -> int:
        return len(self.vals)

    def row_name(self, r: int) -> str:
        return self.row_names[r] if self.row_names else f"c{r}"

    def variable_index(self, name: str) -> int:
        return self.variable_names.index(name)

    def permute_variables(self, order: Sequence[int]) -> "LinearProgram":
        """Same program with variables reordered; new variable k is old order[k]."""
        order = np.asarray(order, dtype=np.int64)
        inverse = np.empty_like(order)
        inverse[order] = np.arange(len(order))
        return LinearProgram(
            name=self.name,
            variable_names=tuple(self.variable_names[k] for k in order),
            lower=self.lower[order],
            upper=self.upper[order],
            objective=self.objective[order],
            maximize=self.maximize,
            row_names=self.row_names,
            rows=self.rows,
            cols=inverse[self.cols],
            vals=self.vals,
            row_is_eq=self.row_is_eq,
            rhs=self.rhs,
        )

    def scaled_rhs(self, alpha: float) -> "LinearProgram":
        """Same program with every right-hand side multiplied by alpha."""
        return self.model_copy(update={"rhs": self.rhs * alpha})

    def max_violation(self, x: np.ndarray) -> float:
        """Largest violation of any row or bound by the point x."""
        lhs = np.zeros(self.num_constraints)
        np.add.at(lhs, self.rows, self.vals * x[self.cols])
        diff = lhs - self.rhs
        row_viol = np.where(self.row_is_eq, np.abs(diff), np.maximum(diff, 0.0))
        bound_viol = np.maximum(self.lower - x, 0.0)
        finite_upper = np.isfinite(self.upper)
        upper_viol = np.where(finite_upper, np.maximum(x - np.where(finite_upper, self.upper, 0.0), 0.0), 0.0)
        parts = [row_viol, bound_viol, upper_viol]
        return float(max((p.max() if p.size else 0.0) for p in parts))


class LPSolution(BaseModel):
    """Solver outcome; ``x`` follows the program's variable order."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: LPStatus
    value: float = float("nan")
    x: Optional[np.ndarray] = None
    variable_names: tuple[str, ...] = ()
    rational_value: Optional[object] = Field(default=None, description="Fraction or None")
    seconds: float = 0.0
    message: str = ""

    def primal(self) -> dict[str, float]:
        """Map variable name -> value (empty unless optimal)."""
        if self.x is None:
            return {}
        return dict(zip(self.variable_names, self.x.tolist()))


class LPBuilder:
    """Accumulates variables and sparse rows, then freezes into a LinearProgram.

    Triplets go into typed arrays so LPs with millions of nonzeros stay
    compact while they are assembled.
    """

    def __init__(self, name: str = "lp", max_nonzeros: Optional[int] = None, keep_row_names: bool = False):
        """Initialize an empty builder.

        Args:
            name: Program name (used in dumps and logs)
            max_nonzeros: Raise DeltaTooLarge once this many nonzeros are exceeded
            keep_row_names: Store constraint names (only worth it for dumps)
        """
        self.name = name
        self.max_nonzeros = max_nonzeros
        self.keep_row_names = keep_row_names
        self._names: list[str] = []
        self._lower = array("d")
        self._upper = array("d")
        self._rows = array("q")
        self._cols = array("q")
        self._vals = array("d")
        self._is_eq = array("b")
        self._rhs = array("d")
        self._row_names: list[str] = []
        self._objective: dict[int, float] = {}
        self._maximize = True

    @property
    def num_variables(self) -> int:
        return len(self._names)

    @property
    def num_constraints(self) -> int:
        return len(self._rhs)

    @property
    def nonzeros(self) -> int:
        return len(self._vals)

    def add_variable(self, name: str, lower: float = 0.0, upper: Optional[float] = None) -> int:
        """Declare a variable (nonnegative unless told otherwise); returns its index."""
        self._names.append(name)
        self._lower.append(-np.inf if lower is None else lower)
        self._upper.append(np.inf if upper is None else upper)
        return len(self._names) - 1

    def add_constraint(
        self,
        coeffs: Coefficients,
        sense: ConstraintSense = ConstraintSense.LE,
        rhs: float = 0.0,
        name: Optional[str] = None,
    ) -> int:
        """Append the row sum(coeffs) <sense> rhs; returns the row index.

        Repeated columns are summed by the solver's sparse conversion.
        """
        row = len(self._rhs)
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for col, val in items:
            self._rows.append(row)
            self._cols.append(col)
            self._vals.append(val)
        self._is_eq.append(1 if sense == ConstraintSense.EQ else 0)
        self._rhs.append(rhs)
        if self.keep_row_names:
            self._row_names.append(name or f"c{row}")
        if self.max_nonzeros is not None and len(self._vals) > self.max_nonzeros:
            raise DeltaTooLarge(len(self._vals), self.max_nonzeros)
        return row

    def add_le(self, cols: Sequence[int], vals: Sequence[float], rhs: float = 0.0, name: Optional[str] = None) -> int:
        """Shorthand for a <= row given parallel column/value lists."""
        return self.add_constraint(zip(cols, vals), ConstraintSense.LE, rhs, name)

    def set_objective(self, coeffs: Coefficients, maximize: bool = True) -> None:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self._objective = {}
        for col, val in items:
            self._objective[col] = self._objective.get(col, 0.0) + val
        self._maximize = maximize

    def build(self) -> LinearProgram:
        """Freeze into a LinearProgram.

        Raises:
            ValueError: a row references an undeclared variable
        """
        n = len(self._names)
        cols = np.frombuffer(self._cols, dtype=np.int64).copy() if self._cols else np.zeros(0, dtype=np.int64)
        if cols.size and (cols.min() < 0 or cols.max() >= n):
            raise ValueError(f"{self.name}: constraint references an undeclared variable")
        if any(k < 0 or k >= n for k in self._objective):
            raise ValueError(f"{self.name}: objective references an undeclared variable")
        objective = np.zeros(n)
        for col, val in self._objective.items():
            objective[col] = val
        return LinearProgram(
            name=self.name,
            variable_names=tuple(self._names),
            lower=np.asarray(self._lower, dtype=float),
            upper=np.asarray(self._upper, dtype=float),
            objective=objective,
            maximize=self._maximize,
            row_names=tuple(self._row_names),
            rows=np.frombuffer(self._rows, dtype=np.int64).copy() if self._rows else np.zeros(0, dtype=np.int64),
            cols=cols,
            vals=np.asarray(self._vals, dtype=float),
            row_is_eq=np.asarray(self._is_eq, dtype=bool),
            rhs=np.asarray(self._rhs, dtype=float),
        )

from .lp_format import format_lp, write_lp
from .model import ConstraintSense, LinearProgram, LPBuilder, LPSolution, LPStatus
from .solver import rationalize, solve, solve_optimal

__all__ = [
    "ConstraintSense",
    "LinearProgram",
    "LPBuilder",
    "LPSolution",
    "LPStatus",
    "format_lp",
    "rationalize",
    "solve",
    "solve_optimal",
    "write_lp",
]

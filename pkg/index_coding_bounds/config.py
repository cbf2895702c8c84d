"""Configuration and solver settings."""

import os
import pathlib
import warnings

from dotenv import load_dotenv

# Load .env from current directory and parent directories
load_dotenv()

# Also try the repository root if nothing was set in the working directory
if not os.environ.get("IC_SOLVER_TOL"):
    current = pathlib.Path(__file__).parent
    for parent in [current.parent, current.parent.parent]:
        env_file = parent / ".env"
        if env_file.exists():
            load_dotenv(env_file)
            break


def _env_number(name: str, default, cast=float):
    """Read a numeric environment variable, warning on garbage.

    Args:
        name: Environment variable name
        default: Value used when the variable is unset or malformed
        cast: Conversion applied to the raw string

    Returns:
        The parsed value or the default
    """
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        warnings.warn(f"{name}={raw!r} is not a valid number, using {default}")
        return default


# Solver settings
SOLVER_TOL = _env_number("IC_SOLVER_TOL", 1e-7)
MAX_NONZEROS = _env_number("IC_MAX_NONZEROS", 5_000_000, cast=lambda s: int(float(s)))

# Rational reconstruction of LP optima
RATIONAL_MAX_DEN = _env_number("IC_RATIONAL_MAX_DEN", 64, cast=int)
RATIONAL_TOL = _env_number("IC_RATIONAL_TOL", 1e-6)

# Inner/outer comparison and reference-table checks
MATCH_TOL = _env_number("IC_MATCH_TOL", 1e-4)

# Catalog sweep
DEFAULT_JOBS = _env_number("IC_JOBS", os.cpu_count() or 1, cast=int)

# Largest n whose default decoding space is the full product
FULL_DELTA_MAX_N = _env_number("IC_FULL_DELTA_MAX_N", 4, cast=int)

# Greedy decoding-space growth
GROW_MAX_ROUNDS = _env_number("IC_GROW_MAX_ROUNDS", 40, cast=int)
GROW_MAX_CANDIDATES = _env_number("IC_GROW_MAX_CANDIDATES", 48, cast=int)
GROW_MIN_GAIN = _env_number("IC_GROW_MIN_GAIN", 1e-6)

# Polymatroidal bound grounding variant: "union" or "per_subset"
THM1_GROUNDING = os.environ.get("IC_THM1_GROUNDING", "union").strip().lower()
if THM1_GROUNDING not in ("union", "per_subset"):
    warnings.warn(f"IC_THM1_GROUNDING={THM1_GROUNDING!r} is unknown, using 'union'")
    THM1_GROUNDING = "union"

# Logging
LOG_LEVEL = os.environ.get("IC_LOG_LEVEL", "INFO").upper()
LOGS_DIR = pathlib.Path(
    os.environ.get("IC_LOGS_DIR", pathlib.Path(__file__).parent.parent / "logs")
)

"""CPLEX LP text dump for cross-checking programs with other solvers."""

import re
from pathlib import Path
from typing import Union

import numpy as np

from .model import LinearProgram

_BAD_CHARS = re.compile(r"[^A-Za-z0-9_.]")


def _name(raw: str) -> str:
    cleaned = _BAD_CHARS.sub("_", raw)
    if not cleaned or cleaned[0].isdigit() or cleaned[0] in ".eE":
        cleaned = "v" + cleaned
    return cleaned


def _terms(cols, vals, names) -> str:
    parts = []
    for col, val in zip(cols, vals):
        if val == 0:
            continue
        sign = "-" if val < 0 else "+"
        mag = abs(val)
        coef = "" if mag == 1 else f"{mag:.12g} "
        parts.append(f"{sign} {coef}{names[col]}")
    if not parts:
        return "0 " + names[0] if names else "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def format_lp(lp: LinearProgram) -> str:
    """Render a program in CPLEX LP format."""
    names = [_name(v) for v in lp.variable_names]
    lines = [f"\\ {lp.name}", "Maximize" if lp.maximize else "Minimize"]
    nz = np.flatnonzero(lp.objective)
    lines.append(f" obj: {_terms(nz, lp.objective[nz], names)}")
    lines.append("Subject To")

    order = np.argsort(lp.rows, kind="stable")
    rows, cols, vals = lp.rows[order], lp.cols[order], lp.vals[order]
    boundaries = np.searchsorted(rows, np.arange(lp.num_constraints + 1))
    for r in range(lp.num_constraints):
        lo, hi = boundaries[r], boundaries[r + 1]
        # merge repeated columns the way the solver's sparse conversion does
        merged: dict[int, float] = {}
        for col, val in zip(cols[lo:hi].tolist(), vals[lo:hi].tolist()):
            merged[col] = merged.get(col, 0.0) + val
        sense = "=" if lp.row_is_eq[r] else "<="
        body = _terms(list(merged), list(merged.values()), names)
        lines.append(f" {_name(lp.row_name(r))}_{r}: {body} {sense} {lp.rhs[r]:.12g}")

    lines.append("Bounds")
    for k, name in enumerate(names):
        lo, hi = lp.lower[k], lp.upper[k]
        if np.isinf(lo) and np.isinf(hi):
            lines.append(f" {name} free")
        elif np.isinf(lo):
            lines.append(f" -inf <= {name} <= {hi:.12g}")
        elif np.isinf(hi):
            if lo != 0:
                lines.append(f" {name} >= {lo:.12g}")
        else:
            lines.append(f" {lo:.12g} <= {name} <= {hi:.12g}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(lp: LinearProgram, path: Union[str, Path]) -> Path:
    """Write ``format_lp(lp)`` to path, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_lp(lp), encoding="utf-8")
    return path

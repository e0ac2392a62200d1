"""Plain-text state files.

Format: ``#`` lines are comments; the first data line is the dimension d,
followed by d lines holding row l of the coefficient matrix (phase index l,
dit index m across the row).
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import BellDiagonalState, validate
from .errors import InvalidStateError
from .tolerances import TOL


def parse_state(text: str) -> BellDiagonalState:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InvalidStateError("state file is empty")
    try:
        d = int(lines[0])
    except ValueError:
        raise InvalidStateError(f"first line must be the integer dimension, got {lines[0]!r}") from None
    rows = lines[1:]
    if len(rows) != d:
        raise InvalidStateError(f"expected {d} matrix rows, found {len(rows)}")
    try:
        a = np.array([[float(v) for v in row.split()] for row in rows])
    except ValueError as exc:
        raise InvalidStateError(f"unparseable matrix entry: {exc}") from None
    if a.shape != (d, d):
        raise InvalidStateError(f"every row must hold {d} entries")
    # leave already-normalised files bit-for-bit intact so write/read round-trips
    drift = validate(a).drift
    return BellDiagonalState.from_matrix(a, renormalize=drift > TOL.norm)


def format_state(s: BellDiagonalState, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(str(s.d))
    for row in s.a:
        out.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(out) + "\n"


def read_state(path) -> BellDiagonalState:
    return parse_state(Path(path).read_text())


def write_state(path, s: BellDiagonalState, comment: str | None = None) -> None:
    Path(path).write_text(format_state(s, comment))

"""Tolerable error rates for two-basis qudit cryptography.

Only the dit-error statistics ``A_{*m}`` are measured, so the phase quantity
``M`` in the characteristic exponent has to be bounded from below. The
bound chain is

    M >= A_00 - sum_{j>0} A_j0 / (d-1)      (column bound)
      >= x - d (1 - x) / (d-1)               (from the symmetry relations)

with ``x = A_{*0}``. The largest dit-error column is written
``f (1 - x) / (d-1)`` with ``1 <= f <= d-1``.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import BellDiagonalState, dft, is_prime
from .errors import NoUsefulBound
from .tolerances import TOL

CSV_COLUMNS = ("d", "f", "x_threshold", "error_rate", "entanglement_bound_x", "binding")


class ClampWarning(UserWarning):
    pass


def clamp_f(f: float, d: int) -> float:
    lo, hi = 1.0, float(max(d - 1, 1))
    if f < lo or f > hi:
        warnings.warn(f"f={f} outside [1, {hi:g}] for d={d}; clamped", ClampWarning, stacklevel=3)
        return min(max(f, lo), hi)
    return float(f)


@dataclass(frozen=True)
class Observables:
    d: int
    x: float
    f: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {self.x}")
        object.__setattr__(self, "f", clamp_f(self.f, self.d))

    @classmethod
    def from_dit_distribution(cls, xi) -> "Observables":
        xi = np.asarray(xi, dtype=float)
        d = len(xi)
        x = float(xi[0])
        rest = float(xi[1:].max())
        f = rest * (d - 1) / (1.0 - x) if x < 1 else 1.0
        return cls(d, x, f)

    @property
    def max_error(self) -> float:
        return self.f * (1.0 - self.x) / (self.d - 1)


def true_m(col0) -> float:
    """``max_{l != 0} |sum_j z^{lj} A_j0|``."""
    return float(np.abs(dft(np.asarray(col0, dtype=float)))[1:].max())


def m_bound_from_column(col0, d: int | None = None) -> float:
    """Lower bound on M from column 0: the real part of the average non-zero Fourier component."""
    col0 = np.asarray(col0, dtype=float)
    d = len(col0) if d is None else d
    return float(col0[0] - col0[1:].sum() / (d - 1))


def m_bound_from_x(x: float, d: int) -> float:
    """Lower bound on M from the no-error probability alone; may be <= 0 (no information)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return x - d * (1.0 - x) / (d - 1)


def exponent_from_observables(obs: Observables) -> float:
    """Conservative characteristic exponent from the measured dit statistics."""
    x, d = obs.x, obs.d
    if x == 1.0:
        return math.inf
    m = m_bound_from_x(x, d)
    if m <= 0:
        raise NoUsefulBound(f"M lower bound {m:.6g} <= 0 at x={x}, d={d}")
    return math.log(x / obs.max_error) / math.log(x / m)


def threshold_x(d: int, f: float) -> float:
    """Smallest no-error probability x for which the conservative exponent exceeds 2."""
    root = math.sqrt((4 * d + f) * f)
    return (2 * d * (2 * d - 1) + (d - 1) * (f + root)) / (2 * ((2 * d - 1) ** 2 + (d - 1) * f))


def entanglement_bound_x(d: int) -> float:
    return (d + 1) / (2 * d)


@dataclass(frozen=True)
class BoundsRow:
    d: int
    f: float
    x_threshold: float
    error_rate: float
    entanglement_bound_x: float
    binding: str
    notes: tuple[str, ...] = ()

    def csv_fields(self) -> list[str]:
        return [
            str(self.d),
            f"{self.f:.12g}",
            f"{self.x_threshold:.12g}",
            f"{self.error_rate:.12g}",
            f"{self.entanglement_bound_x:.12g}",
            self.binding,
        ]


def resolve_f(policy, d: int) -> float:
    """``"iso"`` -> 1, ``"max"`` -> d-1, a number -> that value (clamped)."""
    if policy == "iso":
        return 1.0
    if policy == "max":
        return float(max(d - 1, 1))
    return clamp_f(float(policy), d)


def bounds_row(d: int, f: float) -> BoundsRow:
    x = threshold_x(d, f)
    ent = entanglement_bound_x(d)
    notes = []
    if d == 2:
        notes.append("d = 2: mixing cannot flatten column 1; the qubit analysis applies")
    binding = "threshold" if x > ent else "entanglement"
    return BoundsRow(d, f, x, 1.0 - x, ent, binding, tuple(notes))


@dataclass(frozen=True)
class Sweep:
    rows: list[BoundsRow]
    skipped: list[int]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.csv_fields())
        return buf.getvalue()


def sweep(d_min: int, d_max: int, f_policy="iso") -> Sweep:
    """One row per prime d in [d_min, d_max]; composite d are listed in ``skipped``."""
    if d_min < 2:
        raise ValueError(f"d_min must be >= 2, got {d_min}")
    rows, skipped = [], []
    for d in range(d_min, d_max + 1):
        if not is_prime(d):
            skipped.append(d)
            continue
        rows.append(bounds_row(d, resolve_f(f_policy, d)))
    return Sweep(rows, skipped)


@dataclass(frozen=True)
class SymmetryReport:
    violations: dict[str, float]
    rows_equal_columns: float

    @property
    def passed(self) -> bool:
        return max(self.violations.values()) < TOL.norm


def check_two_basis_symmetry(s: BellDiagonalState) -> SymmetryReport:
    """Largest violation of ``A_lm = A_{-m,l} = A_{-l,-m} = A_{m,-l}`` (indices mod d)."""
    a = s.a
    d = s.d
    idx = np.arange(d)
    neg = (-idx) % d
    images = {
        "A[-m,l]": a[np.ix_(neg, idx)].T,  # entry (l, m) -> a[-m, l]
        "A[-l,-m]": a[np.ix_(neg, neg)],
        "A[m,-l]": a[np.ix_(idx, neg)].T,  # entry (l, m) -> a[m, -l]
    }
    violations = {k: float(np.max(np.abs(a - v))) for k, v in images.items()}
    rows_cols = float(np.max(np.abs(a.sum(axis=1) - a.sum(axis=0))))
    return SymmetryReport(violations, rows_cols)


def symmetrize(a) -> np.ndarray:
    """Average a coefficient matrix over the order-4 group ``(l, m) -> (-m, l)``."""
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    idx = np.arange(d)
    neg = (-idx) % d
    out = a + a[np.ix_(neg, idx)].T + a[np.ix_(neg, neg)] + a[np.ix_(idx, neg)].T
    return out / 4

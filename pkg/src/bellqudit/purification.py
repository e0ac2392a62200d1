"""B-steps on Bell-diagonal coefficient matrices and the phase-mixing operation.

A B-step takes n pairs, applies n-1 bilateral GXORs with the first pair as
control, measures the targets and keeps the control pair iff every parity is
zero. On coefficient matrices this acts column by column: within a fixed dit
column the phase labels of the n inputs add up, i.e. they are convolved, which
is a pointwise product in the Z_d Fourier domain.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .core import BellDiagonalState, fourier_matrix, phase_marginals
from .errors import DegenerateSurvival, InvalidStateError
from .tolerances import TOL

IMAG_RESIDUE = 1e-10
LOG_POWER_THRESHOLD = 64


class MixingWarning(UserWarning):
    """Mixing cannot homogenise the m != 0 columns (d = 2)."""


@dataclass(frozen=True)
class BStepResult:
    state: BellDiagonalState
    survival: float


@dataclass(frozen=True)
class StepDiagnostics:
    x_n: float
    y_n: float
    n: int


def _assemble(products: np.ndarray, scaled_survival: float, log_scale: float) -> BStepResult:
    """Turn Fourier-domain column products into the surviving pair's state.

    ``products[i, m]`` holds the product over inputs of the column Fourier
    transforms, each divided by a per-input scale whose logs sum to
    ``log_scale``; ``scaled_survival`` is the matching rescaled survival.
    """
    d = products.shape[0]
    if not scaled_survival > 0:
        raise DegenerateSurvival("no dit column is shared by all inputs: survival probability is 0")
    log_survival = log_scale + math.log(scaled_survival)
    survival = math.exp(log_survival) if log_survival > -745 else 0.0
    if survival <= TOL.survive:
        raise DegenerateSurvival(
            f"survival probability exp({log_survival:.6g}) is below {TOL.survive:g}"
        )
    out = fourier_matrix(d).conj() @ products / (d * scaled_survival)
    residue = float(np.max(np.abs(out.imag)))
    if residue >= IMAG_RESIDUE:
        raise ArithmeticError(f"B-step output has imaginary residue {residue:.3g}")
    a = out.real
    if a.min() < -TOL.norm:
        raise InvalidStateError(f"B-step produced a negative coefficient {a.min():.3g}")
    return BStepResult(BellDiagonalState.from_matrix(np.clip(a, 0.0, None)), min(survival, 1.0))


def b_step(states: Sequence[BellDiagonalState]) -> BStepResult:
    """Apply one B-step to the given input pairs (any order, any length >= 1)."""
    states = list(states)
    if not states:
        raise ValueError("b_step needs at least one input state")
    d = states[0].d
    if any(s.d != d for s in states):
        raise ValueError("all inputs of a B-step must share the dimension")
    if len(states) == 1:
        return BStepResult(states[0], 1.0)
    z = fourier_matrix(d)
    products = np.ones((d, d), dtype=complex)
    column_products = np.ones(d)
    log_scale = 0.0
    for s in states:
        cols = s.a.sum(axis=0)
        top = cols.max()
        products *= (z @ s.a) / top
        column_products *= cols / top
        log_scale += math.log(top)
    return _assemble(products, float(column_products.sum()), log_scale)


def _column_powers(f: np.ndarray, n: int) -> np.ndarray:
    if n <= LOG_POWER_THRESHOLD:
        return f**n
    out = np.zeros_like(f)
    nz = f != 0
    out[nz] = np.exp(n * np.log(f[nz]))
    return out


def b_step_homogeneous(s: BellDiagonalState, n: int) -> BStepResult:
    """B-step on n identical copies of ``s``."""
    if n < 1 or int(n) != n:
        raise ValueError(f"step size must be a positive integer, got {n}")
    n = int(n)
    if n == 1:
        return BStepResult(s, 1.0)
    cols = s.a.sum(axis=0)
    top = cols.max()
    f = (fourier_matrix(s.d) @ s.a) / top
    scaled = float(np.sum((cols / top) ** n))
    return _assemble(_column_powers(f, n), scaled, n * math.log(top))


def mix(s: BellDiagonalState) -> BellDiagonalState:
    """Average each column over the orbit ``l -> l + 2 t m`` (t in Z_d).

    This is the averaged effect of applying a random power of the local
    unitary with label map ``(l, m) -> (l - 2m, m)``. For odd prime d every
    column m != 0 becomes flat; column 0 is never touched.
    """
    d = s.d
    if d == 2:
        warnings.warn(
            "mixing is the identity for d = 2: 2m = 0 mod 2, so no column is homogenised",
            MixingWarning,
            stacklevel=2,
        )
    a = s.a
    out = np.empty_like(a)
    for m in range(d):
        for l in range(d):
            # exact rational average, rounded once: untouched entries come back bit-identical
            out[l, m] = float(sum(Fraction(a[(l + 2 * t * m) % d, m]) for t in range(d)) / d)
    return BellDiagonalState.from_matrix(out, renormalize=False)


def dit_step(xi, n: int) -> np.ndarray:
    """Dit-error distribution after a B-step: ``xi_i**n`` renormalised."""
    xi = np.asarray(xi, dtype=float)
    if not np.any(xi > 0):
        raise ValueError("dit distribution has no positive entry")
    with np.errstate(divide="ignore"):
        logs = n * np.log(xi)
    return np.exp(logs - logsumexp(logs))


def phase_deviation(p) -> float:
    """``y = |g - p|_2 / sqrt(2)`` with g the uniform distribution."""
    p = np.asarray(p, dtype=float)
    return float(np.linalg.norm(1.0 / len(p) - p) / math.sqrt(2.0))


def dit_error_rate(s: BellDiagonalState) -> float:
    """Total weight of the columns m != 0, summed directly (no 1 - A_{*0} cancellation)."""
    return float(s.a[:, 1:].sum())


def diagnostics(s: BellDiagonalState, n: int) -> StepDiagnostics:
    out = b_step_homogeneous(s, n).state
    return StepDiagnostics(x_n=dit_error_rate(out), y_n=phase_deviation(phase_marginals(out)), n=n)

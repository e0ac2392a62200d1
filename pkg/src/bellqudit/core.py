"""Bell-diagonal qudit states, modular label arithmetic and the Z_d Fourier transform.

A Bell-diagonal state is stored as its d x d coefficient matrix ``a`` with
row index ``l`` (phase error) and column index ``m`` (dit error), so that
``a[l, m]`` is the weight of the generalised Bell state ``|Psi_lm>``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidStateError, NotPrimeError
from .tolerances import TOL


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def check_dimension(d) -> int:
    """Return ``d`` as an int, rejecting non-prime dimensions.

    The quantum Shannon bound (existence of asymmetric CSS codes) is only
    available for prime d, so every state-level computation requires it.
    """
    if isinstance(d, bool) or int(d) != d:
        raise NotPrimeError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < 2 or not is_prime(d):
        raise NotPrimeError(
            f"dimension d={d} is not prime; the CSS-code Shannon bound used "
            "throughout requires a prime dimension"
        )
    return d


@functools.lru_cache(maxsize=None)
def roots_of_unity(d: int) -> np.ndarray:
    """``z**k`` for k = 0..d-1 with ``z = exp(2 pi i / d)``, from cos/sin directly."""
    k = np.arange(d)
    out = np.cos(2 * np.pi * k / d) + 1j * np.sin(2 * np.pi * k / d)
    out[0] = 1.0
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def fourier_matrix(d: int) -> np.ndarray:
    """``F[l, j] = z**(l*j)``; exponents are reduced mod d before lookup."""
    idx = np.outer(np.arange(d), np.arange(d)) % d
    out = roots_of_unity(d)[idx]
    out.setflags(write=False)
    return out


class BellLabel(NamedTuple):
    l: int  # phase
    m: int  # dit


@dataclass(frozen=True)
class Diagnostics:
    total: float
    drift: float
    min_entry: float
    ok: bool
    messages: tuple[str, ...] = ()


def validate(a, *, strict: bool = True) -> Diagnostics:
    """Check a coefficient matrix for negativity and normalisation drift.

    With ``strict`` (the default) invalid matrices raise
    :class:`InvalidStateError`; otherwise the diagnostics are just returned.
    """
    a = np.asarray(a, dtype=float)
    messages = []
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        messages.append(f"coefficient matrix must be square, got shape {a.shape}")
        diag = Diagnostics(math.nan, math.inf, math.nan, False, tuple(messages))
    elif not np.all(np.isfinite(a)):
        messages.append("coefficient matrix has non-finite entries")
        diag = Diagnostics(math.nan, math.inf, math.nan, False, tuple(messages))
    else:
        total = math.fsum(a.ravel())
        drift = abs(total - 1.0)
        min_entry = float(a.min())
        if min_entry < -TOL.norm:
            messages.append(f"negative coefficient {min_entry:.3g}")
        if drift >= TOL.renorm:
            messages.append(f"coefficients sum to {total:.12g} (drift {drift:.3g} >= {TOL.renorm:g})")
        diag = Diagnostics(total, drift, min_entry, not messages, tuple(messages))
    if strict and not diag.ok:
        raise InvalidStateError("; ".join(diag.messages))
    return diag


@dataclass(frozen=True, eq=False)
class BellDiagonalState:
    """Immutable Bell-diagonal state of two qudits.

    Use :meth:`from_matrix` for input that may carry rounding drift; the
    plain constructor insists on a normalised, non-negative matrix.
    """

    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidStateError(f"coefficient matrix must be square, got shape {a.shape}")
        check_dimension(a.shape[0])
        diag = validate(a)
        if diag.drift > TOL.norm:
            raise InvalidStateError(
                f"coefficients sum to {diag.total:.15g}; use BellDiagonalState.from_matrix to renormalise"
            )
        a[a < 0] = 0.0
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def from_matrix(cls, a, renormalize: bool = True) -> "BellDiagonalState":
        a = np.array(a, dtype=float)
        diag = validate(a)
        a[a < 0] = 0.0
        if renormalize and diag.drift > 0:
            a = a / math.fsum(a.ravel())
        return cls(a)

    @property
    def d(self) -> int:
        return self.a.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BellDiagonalState):
            return NotImplemented
        return np.array_equal(self.a, other.a)

    __hash__ = None

    def __repr__(self):
        return f"BellDiagonalState(d={self.d}, a={self.a.tolist()!r})"


def pure_state(d: int, l: int = 0, m: int = 0) -> BellDiagonalState:
    a = np.zeros((d, d))
    a[l % d, m % d] = 1.0
    return BellDiagonalState(a)


def uniform_state(d: int) -> BellDiagonalState:
    return BellDiagonalState(np.full((d, d), 1.0 / (d * d)))


def random_state(d: int, rng: np.random.Generator) -> BellDiagonalState:
    """d*d independent uniform(0, 1] weights, normalised."""
    w = 1.0 - rng.random((d, d))
    return BellDiagonalState.from_matrix(w / w.sum())


def dit_marginals(s: BellDiagonalState) -> np.ndarray:
    """Column sums ``A_{*m}``: the distribution of dit errors."""
    return s.a.sum(axis=0)


def phase_marginals(s: BellDiagonalState) -> np.ndarray:
    """Row sums ``A_{l*}``: the distribution of phase errors."""
    return s.a.sum(axis=1)


def dft(v, normalized: bool = False) -> np.ndarray:
    """``F_l = sum_j z**(l*j) v_j``; ``normalized`` adds the unitary d**-1/2 factor.

    ``v`` may also be a d x d array, in which case each column is transformed.
    """
    v = np.asarray(v)
    out = fourier_matrix(v.shape[0]) @ v
    if normalized:
        out = out / math.sqrt(v.shape[0])
    return out


def inverse_dft(f) -> np.ndarray:
    """Inverse of :func:`dft` (unnormalised forward convention)."""
    f = np.asarray(f)
    d = f.shape[0]
    return fourier_matrix(d).conj() @ f / d


def p_norm(v, p: float) -> float:
    v = np.abs(np.asarray(v))
    if p == math.inf:
        return float(v.max()) if v.size else 0.0
    if p < 1:
        raise ValueError(f"p-norm needs p >= 1, got {p}")
    top = v.max() if v.size else 0.0
    if top == 0:
        return 0.0
    # scaling by the largest entry keeps large p from overflowing
    return float(top * np.sum((v / top) ** p) ** (1.0 / p))


def gbxor_labels(a, b, d: int):
    """Bilateral GXOR on two Bell labels, control ``a`` and target ``b``.

    ``(l1, m1) x (l2, m2) -> (l1 + l2, m1) x (l2, m1 - m2)`` modulo d. The
    label components may be numpy integer arrays for vectorised use.
    """
    l1, m1 = a
    l2, m2 = b
    return BellLabel((l1 + l2) % d, m1), BellLabel(l2, (m1 - m2) % d)

"""Shannon entropies and the two analytic entropy bounds used by the correctability criterion."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tolerances import TOL

ZERO_FLOOR = 1e-300  # entries below this count as exact zeros in p log p


def shannon_d(p, d: int | None = None) -> float:
    """Shannon entropy to base ``d`` (default: the length of ``p``)."""
    p = np.asarray(p, dtype=float)
    d = len(p) if d is None else d
    q = p[p > ZERO_FLOOR]
    return float(-np.sum(q * np.log(q)) / math.log(d))


def binary_h(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x <= ZERO_FLOOR or 1.0 - x <= ZERO_FLOOR:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


@dataclass(frozen=True)
class EntropyBoundsResult:
    h_min: float
    h_max: float
    h: float


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > ZERO_FLOOR else 0.0


def entropy_bounds(xi) -> EntropyBoundsResult:
    """Sandwich H_d(xi) between the entropies of its extreme rearrangements.

    With ``x = 1 - xi[0]``, the lower partner puts all of ``x`` on one error
    value and the upper partner spreads it evenly over the d-1 error values.
    """
    xi = np.asarray(xi, dtype=float)
    d = len(xi)
    ln_d = math.log(d)
    x0 = float(xi[0])
    x = max(0.0, float(np.sum(xi[1:])))
    h_min = -(_xlogx(x0) + _xlogx(x)) / ln_d
    spread = -(x * math.log(x / (d - 1))) if x > ZERO_FLOOR else 0.0
    h_max = (-_xlogx(x0) + spread) / ln_d
    return EntropyBoundsResult(h_min=h_min, h_max=h_max, h=shannon_d(xi))


@dataclass(frozen=True)
class TaylorConstants:
    k: float
    k_prime: float
    f: float

    @classmethod
    def for_dimension(cls, d: int, f: float) -> "TaylorConstants":
        if not f > 0:
            raise ValueError(f"floor factor f must be positive, got {f}")
        ln_d = math.log(d)
        return cls(k=d / (2 * ln_d), k_prime=d * d / (6 * f * f * ln_d), f=f)


def taylor_check(p, f: float) -> tuple[float, float]:
    """Return ``(|H_d(p) - 1 + K |g-p|_2^2|, K' |g-p|_3^3)``.

    The first value is the actual second-order remainder, the second its
    Lagrange bound; the bound only holds when every ``p_i >= f/d``.
    """
    p = np.asarray(p, dtype=float)
    d = len(p)
    floor = f / d
    if np.any(p < floor - TOL.norm * floor):
        raise ValueError(f"p violates the floor p_i >= f/d = {floor:.6g}: min entry {p.min():.6g}")
    c = TaylorConstants.for_dimension(d, f)
    dev = np.abs(1.0 / d - p)
    lhs = abs(shannon_d(p) - 1.0 + c.k * float(np.sum(dev**2)))
    bound = c.k_prime * float(np.sum(dev**3))
    return lhs, bound

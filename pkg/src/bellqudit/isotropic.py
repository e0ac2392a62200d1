"""Generalised isotropic states: a four-parameter family closed under B-steps.

The coefficient matrix has ``alpha`` at (0, 0), ``beta`` on the rest of
column 0, ``gamma`` on the rest of row 0 and ``delta`` everywhere else.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BellDiagonalState, check_dimension
from .correctability import Verdict, classify
from .errors import DegenerateSurvival, InvalidStateError, UndefinedExponent
from .tolerances import TOL


@dataclass(frozen=True)
class IsotropicParams:
    d: int
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        check_dimension(self.d)
        vals = (self.alpha, self.beta, self.gamma, self.delta)
        if min(vals) < 0:
            raise InvalidStateError(f"isotropic parameters must be non-negative, got {vals}")
        total = self.total()
        if abs(total - 1.0) > TOL.norm:
            raise InvalidStateError(f"isotropic parameters sum to {total:.15g}, not 1")

    def total(self) -> float:
        d = self.d
        return self.alpha + (d - 1) * self.beta + (d - 1) * self.gamma + (d - 1) ** 2 * self.delta

    @property
    def column0(self) -> float:
        """Weight of the error-free dit column, ``alpha + (d-1) beta``."""
        return self.alpha + (self.d - 1) * self.beta

    @property
    def error_column(self) -> float:
        """Weight of each dit-error column, ``gamma + (d-1) delta``."""
        return self.gamma + (self.d - 1) * self.delta

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.alpha, self.beta, self.gamma, self.delta


def isotropic(d: int, alpha: float) -> IsotropicParams:
    """The ordinary isotropic state: everything off (0, 0) equal."""
    rest = (1.0 - alpha) / (d * d - 1)
    return IsotropicParams(d, alpha, rest, rest, rest)


def iso_to_state(p: IsotropicParams) -> BellDiagonalState:
    a = np.full((p.d, p.d), p.delta)
    a[0, :] = p.gamma
    a[:, 0] = p.beta
    a[0, 0] = p.alpha
    return BellDiagonalState.from_matrix(a)


def iso_b_step(p: IsotropicParams, n: int) -> tuple[IsotropicParams, float]:
    """Closed-form B-step on a generalised isotropic state; returns (params, survival)."""
    if n < 1 or int(n) != n:
        raise ValueError(f"step size must be a positive integer, got {n}")
    if n == 1:
        return p, 1.0
    d = p.d
    s0, e0 = p.column0**n, (p.alpha - p.beta) ** n
    s1, e1 = p.error_column**n, (p.gamma - p.delta) ** n
    survival = s0 + (d - 1) * s1
    if survival <= TOL.survive:
        raise DegenerateSurvival(f"survival probability {survival:.3g} is below {TOL.survive:g}")
    dn = d * survival
    alpha = (s0 + (d - 1) * e0) / dn
    beta = (s0 - e0) / dn
    gamma = (s1 + (d - 1) * e1) / dn
    delta = (s1 - e1) / dn
    # rescale away the last-ulp drift so the invariant check cannot trip
    total = alpha + (d - 1) * (beta + gamma) + (d - 1) ** 2 * delta
    return IsotropicParams(d, alpha / total, beta / total, gamma / total, delta / total), survival


def iso_exponent(p: IsotropicParams) -> float:
    """``ln[column0 / error_column] / ln[column0 / |alpha - beta|]``."""
    if not p.column0 > p.error_column + TOL.tie:
        raise UndefinedExponent(
            f"dit column 0 ({p.column0:.12g}) is not strictly heavier than the others ({p.error_column:.12g})"
        )
    m = abs(p.alpha - p.beta)
    if m <= TOL.tie * p.column0:
        return 0.0
    if p.error_column == 0 or m >= p.column0:
        return math.inf
    return math.log(p.column0 / p.error_column) / math.log(p.column0 / m)


def product_margin(p: IsotropicParams) -> float:
    """``(alpha - beta)**2 - column0 * error_column``; positive iff the exponent exceeds 2."""
    return (p.alpha - p.beta) ** 2 - p.column0 * p.error_column


def printed_shortcut(p: IsotropicParams) -> float:
    """``alpha**2 + beta**2 - 2 [alpha + (d-1) beta] / d``, kept for comparison only.

    It does not agree with the exponent criterion (e.g. it is negative for
    d = 3, (0.7, 0.05, 0.05, 0.025), where r is about 10), so it never
    decides a verdict.
    """
    return p.alpha**2 + p.beta**2 - 2 * p.column0 / p.d


def iso_correctable(p: IsotropicParams) -> Verdict:
    r = iso_exponent(p)
    verdict = classify(r)
    if verdict is not Verdict.INDETERMINATE:
        by_product = product_margin(p) > 0
        if by_product != (verdict is Verdict.CORRECTABLE):
            raise ArithmeticError(
                f"exponent r={r:.12g} and product margin {product_margin(p):.3g} disagree"
            )
    return verdict

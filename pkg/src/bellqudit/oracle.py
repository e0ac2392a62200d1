"""Brute-force cross-checks that share no algebra with the fast paths.

``oracle_b_step`` enumerates every joint Bell label of the n input pairs and
pushes it through the GXOR cascade; ``oracle_mix`` permutes labels explicitly;
``oracle_threshold`` bisects the conservative exponent for r = 2.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from .bounds import Observables, entanglement_bound_x, exponent_from_observables
from .core import BellDiagonalState, gbxor_labels
from .errors import CapacityExceeded, DegenerateSurvival, NoRoot
from .purification import BStepResult

ORACLE_CAP = 10**7


def oracle_b_step(states: Sequence[BellDiagonalState]) -> BStepResult:
    """Exact B-step by enumeration of all ``d**(2n)`` weighted label tuples.

    The enumeration is sharded by the control pair's label; within a shard
    the target labels are vectorised. Shards are merged in a fixed order.
    """
    states = list(states)
    if not states:
        raise ValueError("oracle_b_step needs at least one input state")
    d = states[0].d
    n = len(states)
    if d ** (2 * n) > ORACLE_CAP:
        raise CapacityExceeded(f"d**(2n) = {d ** (2 * n)} tuples exceeds the cap {ORACLE_CAP}")
    if n == 1:
        return BStepResult(states[0], 1.0)

    targets = states[1:]
    # every joint assignment of (l_k, m_k) to the n-1 target pairs
    grid = np.indices((d, d) * len(targets)).reshape(2 * len(targets), -1)
    t_weight = np.ones(grid.shape[1])
    for k, s in enumerate(targets):
        t_weight = t_weight * s.a[grid[2 * k], grid[2 * k + 1]]

    kept = np.zeros((d, d))
    for l1, m1 in itertools.product(range(d), range(d)):
        w1 = states[0].a[l1, m1]
        if w1 == 0:
            continue
        control = (np.full(grid.shape[1], l1), np.full(grid.shape[1], m1))
        survive = np.ones(grid.shape[1], dtype=bool)
        for k in range(len(targets)):
            control, target = gbxor_labels(control, (grid[2 * k], grid[2 * k + 1]), d)
            survive &= target.m == 0
        if not survive.any():
            continue
        weights = w1 * t_weight[survive]
        np.add.at(kept, (control.l[survive], control.m[survive]), weights)

    survival = math.fsum(kept.ravel())
    if survival <= 0:
        raise DegenerateSurvival("no label tuple passes post-selection")
    return BStepResult(BellDiagonalState.from_matrix(kept / survival), survival)


def oracle_mix(s: BellDiagonalState) -> BellDiagonalState:
    """Average of the d label permutations ``(l, m) -> (l - 2 t m, m)``, t = 0..d-1."""
    d = s.d
    permuted = []
    for t in range(d):
        b = np.empty_like(s.a)
        for l, m in itertools.product(range(d), range(d)):
            b[(l - 2 * t * m) % d, m] = s.a[l, m]
        permuted.append(b)
    stack = np.stack(permuted)
    out = np.empty_like(s.a)
    for l, m in itertools.product(range(d), range(d)):
        out[l, m] = float(sum(map(Fraction, stack[:, l, m])) / d)
    return BellDiagonalState.from_matrix(out, renormalize=False)


def oracle_threshold(d: int, f: float, xtol: float = 1e-14) -> float:
    """Root of ``r(x) = 2`` on ``((d+1)/(2d), 1)`` by bisection."""
    lo = entanglement_bound_x(d)
    hi = 1.0 - 1e-15

    def g(x):
        return exponent_from_observables(Observables(d, x, f)) - 2.0

    g_lo, g_hi = g(lo), g(hi)
    if g_lo * g_hi > 0:
        raise NoRoot(f"r - 2 has no sign change on [{lo}, {hi}] for d={d}, f={f}")
    return bisect(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)

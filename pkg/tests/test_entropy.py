import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellqudit import binary_h, entropy_bounds, shannon_d, taylor_check
from bellqudit.entropy import TaylorConstants


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_shannon_extremes(d):
    assert shannon_d(np.full(d, 1 / d)) == pytest.approx(1)
    assert shannon_d(np.eye(d)[0]) == 0


def test_shannon_example():
    assert shannon_d([0.5, 0.25, 0.25]) == pytest.approx(0.946394630357186, abs=1e-12)


def test_binary_entropy():
    assert binary_h(0.5) == 1
    assert binary_h(0.0) == 0
    assert binary_h(1.0) == 0
    assert binary_h(0.2) == pytest.approx(0.7219280948873623, abs=1e-12)
    with pytest.raises(ValueError):
        binary_h(1.5)


@given(st.floats(0, 1))
def test_binary_matches_shannon_base2(x):
    assert abs(shannon_d([1 - x, x]) - binary_h(x)) < 1e-12


def test_entropy_bounds_examples():
    # direct evaluation: -(0.8 ln 0.8 + 0.2 ln 0.2)/ln 3 and -(0.8 ln 0.8 + 0.2 ln 0.1)/ln 3
    res = entropy_bounds([0.8, 0.1, 0.1])
    assert res.h_min == pytest.approx(0.4554859150035952, abs=1e-12)
    assert res.h_max == pytest.approx(0.5816718657178868, abs=1e-12)
    assert res.h == pytest.approx(res.h_max, abs=1e-14)
    pure = entropy_bounds([1.0, 0.0, 0.0])
    assert pure.h_min == pure.h == pure.h_max == 0
    lower = entropy_bounds([0.8, 0.2, 0.0])
    assert lower.h == pytest.approx(lower.h_min, abs=1e-14)


def test_taylor_constants():
    c = TaylorConstants.for_dimension(3, 0.5)
    assert c.k == pytest.approx(3 / (2 * math.log(3)))
    assert c.k_prime == pytest.approx(9 / (6 * 0.25 * math.log(3)))


def test_taylor_check_examples():
    assert taylor_check(np.full(5, 0.2), 0.9) == pytest.approx((0.0, 0.0), abs=1e-15)
    lhs, bound = taylor_check([0.4, 0.35, 0.25], 0.5)
    assert 0 < lhs <= bound
    with pytest.raises(ValueError):
        taylor_check([0.9, 0.05, 0.05], 0.5)


def test_taylor_check_near_uniform(rng):
    d, f = 5, 0.8
    for _ in range(1000):
        p = f / d + (1 - f) * rng.dirichlet(np.ones(d))
        lhs, bound = taylor_check(p, f)
        assert lhs <= bound + 1e-12


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_concavity(d, rng):
    for _ in range(500):
        xi, eta = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d) * 0.3)
        lam = rng.random()
        mixed = shannon_d(lam * xi + (1 - lam) * eta)
        assert mixed >= lam * shannon_d(xi) + (1 - lam) * shannon_d(eta) - 1e-12


def test_entropy_tiny_entries_no_underflow():
    assert math.isfinite(shannon_d([1 - 1e-320, 1e-320]))

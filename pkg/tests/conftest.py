import numpy as np
import pytest

from bellqudit import BellDiagonalState

EXAMPLE = [[0.7, 0.1], [0.1, 0.1]]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def qubit_example():
    return BellDiagonalState(np.array(EXAMPLE))


def random_matrix(d, rng):
    w = 1.0 - rng.random((d, d))
    return w / w.sum()


def biased_state(d, rng):
    """Random state with a heavy column 0 and a peaked phase in it; covers both verdicts."""
    w = 1.0 - rng.random((d, d))
    w[:, 0] *= rng.uniform(1, 30)
    w[0, 0] *= rng.uniform(1, 200)
    return BellDiagonalState.from_matrix(w / w.sum())

import numpy as np
import pytest

from relaybounds import GaussianChannel, OptimizerConfig


@pytest.fixture
def ch_symmetric():
    """Unit-noise channel with equal 10 dB powers; general (non-degraded-only) tests."""
    return GaussianChannel(10.0, 10.0, 10.0, 1.0, 1.0)


@pytest.fixture
def ch_degraded():
    """10 dB powers, 20 dB destination noise: the degraded showcase channel."""
    return GaussianChannel(10.0, 10.0, 10.0, 1.0, 100.0)


@pytest.fixture
def cfg_fast():
    return OptimizerConfig(grid_points_per_dim=17)


@pytest.fixture
def cfg_coarse():
    return OptimizerConfig(grid_points_per_dim=9)


def random_channels(seed, count, lo=0.1, hi=100.0):
    """Log-uniform channels used by the randomized suites."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        p = 10.0 ** rng.uniform(np.log10(lo), np.log10(hi), size=5)
        yield GaussianChannel(*p)

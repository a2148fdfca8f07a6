import numpy as np
import pytest

from gasbox.thermo import GasParams


@pytest.fixture
def gas():
    return GasParams(gamma=1.4, R=1.0, mu0=0.01, mu1=1e-4, kappa_r=1e-6)


@pytest.fixture
def inviscid_gas():
    return GasParams(gamma=1.4, R=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import numpy as np
import pytest

from bornosc import OscParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def unit_params():
    return OscParams(1.0)

import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from loccbound.ensembles import Ensemble, make_pure
from loccbound.randomized import default_seed

settings.register_profile("loccbound", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("loccbound")

FIXTURES = Path(__file__).parent / "fixtures"
S2 = 1 / math.sqrt(2)
BELLS = [
    [S2, 0, 0, S2],
    [S2, 0, 0, -S2],
    [0, S2, S2, 0],
    [0, S2, -S2, 0],
]


@pytest.fixture
def gen():
    return np.random.default_rng(default_seed())


@pytest.fixture
def bell_ensemble():
    return Ensemble.from_states([make_pure([2, 2], b) for b in BELLS])


@pytest.fixture
def ghz3():
    v = np.zeros(8)
    v[0] = v[7] = S2
    return make_pure([2, 2, 2], v)

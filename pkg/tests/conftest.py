import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from transdim import datasets


@pytest.fixture(scope="session")
def enzyme_data():
    return datasets.load_dataset("enzyme")


@pytest.fixture(scope="session")
def acidity_data():
    return datasets.load_dataset("acidity")


@pytest.fixture(scope="session")
def galaxy_data():
    return datasets.load_dataset("galaxy")


@pytest.fixture
def rng():
    def make(seed=0):
        return np.random.Generator(np.random.PCG64(seed))

    return make

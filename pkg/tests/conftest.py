import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from abcm.graphs import Graph


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def path3():
    """Path graph a-b-c used by the worked step examples."""
    return Graph(3, [0, 1], [1, 2])


@pytest.fixture
def single_edge():
    return Graph(2, [0], [1])

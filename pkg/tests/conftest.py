import numpy as np
import pytest

from lanslab.dyadic import build_dyadic_family
from lanslab.grid import Grid


@pytest.fixture(scope="session")
def grid2d():
    return Grid(n=2, N=32)


@pytest.fixture(scope="session")
def grid3d():
    return Grid(n=3, N=32)


@pytest.fixture(scope="session")
def grid3d_small():
    return Grid(n=3, N=16)


@pytest.fixture(scope="session")
def family2d(grid2d):
    return build_dyadic_family(grid2d)


@pytest.fixture(scope="session")
def family3d(grid3d):
    return build_dyadic_family(grid3d)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

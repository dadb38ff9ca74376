import numpy as np
import pytest

from gp2d.grid import make_grid
from gp2d.soliton import critical_coupling, lift_to_grid, solve_townes


@pytest.fixture(scope="session")
def profile():
    return solve_townes(tol=1e-12)


@pytest.fixture(scope="session")
def a_star(profile):
    return critical_coupling(profile)


@pytest.fixture(scope="session")
def grid16():
    return make_grid(16.0, 256)


@pytest.fixture(scope="session")
def grid_small():
    # too small a box for the Townes body; used for cheap generic tests
    return make_grid(8.0, 64)


@pytest.fixture(scope="session")
def q0(profile, grid16):
    return lift_to_grid(profile, grid16)


@pytest.fixture(scope="session")
def grid512():
    # fine grid: resolves dilations down to width 1/4 under the 4-cell rule
    return make_grid(16.0, 512)


@pytest.fixture(scope="session")
def q0_512(profile, grid512):
    return lift_to_grid(profile, grid512)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)

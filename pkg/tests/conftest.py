import numpy as np
import pytest

from lagbound.surface import (flat_cylinder, hyperbolic_band, plane_annulus,
                              sphere_band, unit_cylinder)

# Moderate grids keep the unit tests fast; the acceptance module builds its
# own full-resolution patches where a criterion demands them.
GRID = (512, 129)


@pytest.fixture(scope="session")
def cyl():
    return flat_cylinder(halfwidth=1.5, grid=GRID)


@pytest.fixture(scope="session")
def cyl_wide():
    return flat_cylinder(halfwidth=3.0, grid=GRID)


@pytest.fixture(scope="session")
def plane():
    return plane_annulus(circle_radius=2.0, halfwidth=1.0, grid=GRID)


@pytest.fixture(scope="session")
def plane_wide():
    return plane_annulus(circle_radius=2.0, halfwidth=1.5, grid=GRID)


@pytest.fixture(scope="session")
def sphere():
    return sphere_band(halfwidth=0.6, grid=GRID)


@pytest.fixture(scope="session")
def hyperbolic():
    return hyperbolic_band(halfwidth=0.6, grid=GRID)


@pytest.fixture(scope="session")
def ucyl():
    return unit_cylinder(halfwidth=1.25, grid=(512, 129))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

"""
Pytest configuration and fixtures for pan-sharpening tests
"""

import numpy as np
import pytest
import structlog

from src.python.models.raster import Band, MultiBandImage
from src.pytest.scenes import fields_scene, hills_scene


@pytest.fixture(autouse=True)
def _reset_structlog():
    """Undo CLI logging configuration so later tests do not log to a closed capture stream"""
    yield
    structlog.reset_defaults()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so random cases are reproducible"""
    return np.random.default_rng(20240611)


@pytest.fixture(params=["hills", "fields"])
def natural_scene(request) -> MultiBandImage:
    """Two synthetic natural-looking 3-band reference images"""
    if request.param == "hills":
        return hills_scene()
    return fields_scene()


@pytest.fixture
def small_pan() -> Band:
    return Band(np.array([[10.0, 20.0, 30.0, 40.0], [50.0, 60.0, 70.0, 80.0], [90.0, 100.0, 110.0, 120.0]]))


@pytest.fixture
def small_ms() -> MultiBandImage:
    """3-band 2 x 2 MS image"""
    return MultiBandImage.from_array(
        np.array(
            [
                [[10.0, 20.0], [30.0, 40.0]],
                [[20.0, 20.0], [10.0, 0.0]],
                [[40.0, 60.0], [20.0, 0.0]],
            ]
        )
    )


@pytest.fixture
def uniform_band() -> Band:
    """16 x 16 band holding every 8-bit level exactly once"""
    return Band(np.arange(256, dtype=np.float64).reshape(16, 16))

"""
Synthetic natural-looking reference scenes shared by fixtures and tests
"""

import numpy as np

from src.python.models.raster import Band, MultiBandImage


def hills_scene(height: int = 96, width: int = 96, seed: int = 7) -> MultiBandImage:
    """Smooth, band-limited 3-band terrain; every sample stays well inside 1..254"""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    bands = []
    for base in (110.0, 130.0, 150.0):
        phase = rng.uniform(0, 2 * np.pi, size=3)
        plane = (
            base
            + 45.0 * np.sin(2 * np.pi * x / 40.0 + phase[0]) * np.cos(2 * np.pi * y / 56.0 + phase[1])
            + 15.0 * np.sin(2 * np.pi * (x + y) / 23.0 + phase[2])
        )
        bands.append(Band(np.round(plane)))
    return MultiBandImage.from_bands(bands)


def fields_scene(height: int = 96, width: int = 96, seed: int = 11) -> MultiBandImage:
    """Patchwork of 24 x 24 fields with distinct colors and a gentle illumination gradient"""
    rng = np.random.default_rng(seed)
    rows = -(-height // 24)
    cols = -(-width // 24)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    gradient = 10.0 * (x + y) / (height + width)
    bands = []
    for _ in range(3):
        colors = rng.uniform(40.0, 210.0, size=(rows, cols))
        plane = np.kron(colors, np.ones((24, 24)))[:height, :width] + gradient
        bands.append(Band(np.round(plane)))
    return MultiBandImage.from_bands(bands)

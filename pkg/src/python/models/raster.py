"""
Raster value types shared by every fusion and metrics module
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, Tuple

import numpy as np

from src.python.errors import InvalidArgumentError, InvalidDataError


@dataclass(frozen=True, eq=False)
class Band:
    """One 2-D grid of float64 digital numbers (DN), row-major, immutable"""

    samples: np.ndarray

    def __post_init__(self):
        array = np.array(self.samples, dtype=np.float64, copy=True)
        if array.ndim != 2:
            raise InvalidArgumentError(f"Band samples must be 2-D, got {array.ndim}-D")
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise InvalidArgumentError(f"Band must be at least 1x1, got {array.shape[1]}x{array.shape[0]}")
        if not np.isfinite(array).all():
            raise InvalidDataError("Band samples must be finite (found NaN or Inf)")
        array.setflags(write=False)
        object.__setattr__(self, "samples", array)

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.samples.shape

    @property
    def pixel_count(self) -> int:
        return self.samples.size

    @classmethod
    def constant(cls, value: float, width: int, height: int) -> Band:
        return cls(np.full((height, width), value, dtype=np.float64))

    def is_integral(self) -> bool:
        return bool(np.all(self.samples == np.floor(self.samples)))


@dataclass(frozen=True, eq=False)
class MultiBandImage:
    """Ordered set of equally-sized bands (an MS image or a fused result)"""

    bands: Tuple[Band, ...]

    def __post_init__(self):
        bands = tuple(self.bands)
        if not bands:
            raise InvalidArgumentError("MultiBandImage needs at least one band")
        shape = bands[0].shape
        for index, band in enumerate(bands):
            if band.shape != shape:
                raise InvalidArgumentError(
                    f"Band {index + 1} is {band.width}x{band.height}, expected {shape[1]}x{shape[0]}"
                )
        object.__setattr__(self, "bands", bands)

    def __iter__(self) -> Iterator[Band]:
        return iter(self.bands)

    def __len__(self) -> int:
        return len(self.bands)

    def __getitem__(self, index: int) -> Band:
        return self.bands[index]

    @property
    def band_count(self) -> int:
        return len(self.bands)

    @property
    def height(self) -> int:
        return self.bands[0].height

    @property
    def width(self) -> int:
        return self.bands[0].width

    @property
    def shape(self) -> Tuple[int, int]:
        return self.bands[0].shape

    @classmethod
    def from_bands(cls, bands: Sequence[Band]) -> MultiBandImage:
        return cls(tuple(bands))

    @classmethod
    def from_array(cls, stack: np.ndarray) -> MultiBandImage:
        """Build from a (K, H, W) array; a 2-D array is taken as a single band"""
        stack = np.asarray(stack, dtype=np.float64)
        if stack.ndim == 2:
            stack = stack[np.newaxis]
        if stack.ndim != 3:
            raise InvalidArgumentError(f"Expected a (bands, height, width) array, got shape {stack.shape}")
        return cls(tuple(Band(plane) for plane in stack))

    def to_array(self) -> np.ndarray:
        return np.stack([band.samples for band in self.bands])


@dataclass(frozen=True)
class QuantizationPolicy:
    """Clamp to [lo, hi] then round half away from zero"""

    lo: float = 0.0
    hi: float = 255.0


DEFAULT_POLICY = QuantizationPolicy()

HISTOGRAM_LEVELS = 256


@dataclass(frozen=True, eq=False)
class Histogram:
    """256-level tally of a quantized band"""

    counts: np.ndarray = field(default_factory=lambda: np.zeros(HISTOGRAM_LEVELS, dtype=np.int64))

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.shape != (HISTOGRAM_LEVELS,):
            raise InvalidArgumentError(f"Histogram needs {HISTOGRAM_LEVELS} counts, got {counts.shape}")
        if (counts < 0).any():
            raise InvalidArgumentError("Histogram counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def probabilities(self) -> np.ndarray:
        return self.counts / self.total

    def cumulative(self) -> np.ndarray:
        """Integer cumulative counts; CDF(v) = cumulative()[v] / total"""
        return np.cumsum(self.counts)

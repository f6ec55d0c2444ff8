"""
Orthonormal Haar 2-D DWT and substitutive wavelet fusion.

One analysis level filters the rows with the low/high taps and keeps the
even-indexed outputs, then does the same along the columns:

    A = LL (approximation)
    H = LH (horizontal detail: rows low-passed, columns high-passed)
    V = HL (vertical detail)
    D = HH (diagonal detail)

Odd dimensions are padded to even by repeating the last row / column; the
padding is recorded on the level and stripped again on synthesis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import structlog

from src.python.errors import InvalidArgumentError, WaveletLevelsError
from src.python.models.raster import Band, MultiBandImage
from src.python.utils.arithmetic import FusionInput
from src.python.utils.raster import histogram_match

logger = structlog.get_logger(__file__)

DEFAULT_LEVELS = 1


class HaarFilters:
    LOW = np.array([1.0, 1.0]) / math.sqrt(2.0)
    HIGH = np.array([1.0, -1.0]) / math.sqrt(2.0)


@dataclass(frozen=True)
class Padding:
    rows: bool = False
    cols: bool = False


@dataclass(frozen=True, eq=False)
class DetailPlanes:
    horizontal: Band
    vertical: Band
    diagonal: Band
    padding: Padding = Padding()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.horizontal.shape


@dataclass(frozen=True, eq=False)
class HaarLevel:
    approx: Band
    horizontal: Band
    vertical: Band
    diagonal: Band
    padding: Padding = Padding()

    @property
    def details(self) -> DetailPlanes:
        return DetailPlanes(self.horizontal, self.vertical, self.diagonal, self.padding)


@dataclass(frozen=True, eq=False)
class WaveletPyramid:
    """Coarsest approximation plus per-level details, finest level first"""

    approx: Band
    details: Tuple[DetailPlanes, ...]

    def __post_init__(self):
        details = tuple(self.details)
        if not details:
            raise InvalidArgumentError("A wavelet pyramid needs at least one detail level")
        object.__setattr__(self, "details", details)

    @property
    def levels(self) -> int:
        return len(self.details)

    def with_details(self, details: Tuple[DetailPlanes, ...]) -> WaveletPyramid:
        return WaveletPyramid(approx=self.approx, details=details)

    def without_details(self) -> WaveletPyramid:
        """Same approximation with every detail plane zeroed (the low-pass projection)"""
        zeroed = []
        for level in self.details:
            zero = Band(np.zeros(level.shape))
            zeroed.append(DetailPlanes(zero, zero, zero, level.padding))
        return self.with_details(tuple(zeroed))


def _analyze_axis(x: np.ndarray, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    x = np.moveaxis(x, axis, 0)
    even, odd = x[0::2], x[1::2]
    low = HaarFilters.LOW[0] * even + HaarFilters.LOW[1] * odd
    high = HaarFilters.HIGH[0] * even + HaarFilters.HIGH[1] * odd
    return np.moveaxis(low, 0, axis), np.moveaxis(high, 0, axis)


def _synthesize_axis(low: np.ndarray, high: np.ndarray, axis: int) -> np.ndarray:
    low = np.moveaxis(low, axis, 0)
    high = np.moveaxis(high, axis, 0)
    out = np.empty((2 * low.shape[0],) + low.shape[1:], dtype=np.float64)
    out[0::2] = HaarFilters.LOW[0] * low + HaarFilters.HIGH[0] * high
    out[1::2] = HaarFilters.LOW[1] * low + HaarFilters.HIGH[1] * high
    return np.moveaxis(out, 0, axis)


def haar_analyze_level(band: Band) -> HaarLevel:
    """Single-level 2-D Haar analysis into A, H, V, D"""
    height, width = band.shape
    padding = Padding(rows=height % 2 == 1, cols=width % 2 == 1)
    x = np.pad(band.samples, ((0, int(padding.rows)), (0, int(padding.cols))), mode="edge")

    rows_low, rows_high = _analyze_axis(x, axis=1)
    approx, horizontal = _analyze_axis(rows_low, axis=0)
    vertical, diagonal = _analyze_axis(rows_high, axis=0)
    return HaarLevel(Band(approx), Band(horizontal), Band(vertical), Band(diagonal), padding)


def haar_synthesize_level(
    approx: Band, horizontal: Band, vertical: Band, diagonal: Band, padding: Padding = Padding()
) -> Band:
    """Exact inverse of haar_analyze_level"""
    shapes = {approx.shape, horizontal.shape, vertical.shape, diagonal.shape}
    if len(shapes) != 1:
        raise InvalidArgumentError(f"Wavelet planes must share dimensions, got {sorted(shapes)}")

    rows_low = _synthesize_axis(approx.samples, horizontal.samples, axis=0)
    rows_high = _synthesize_axis(vertical.samples, diagonal.samples, axis=0)
    x = _synthesize_axis(rows_low, rows_high, axis=1)
    height = x.shape[0] - int(padding.rows)
    width = x.shape[1] - int(padding.cols)
    return Band(x[:height, :width])


def max_levels(height: int, width: int) -> int:
    """Deepest decomposition: halve (rounding up) until both sides reach 1"""
    return max(1, (max(height, width) - 1).bit_length())


def decompose(band: Band, levels: int = DEFAULT_LEVELS) -> WaveletPyramid:
    """Iterate the Haar analysis on successive approximations"""
    feasible = max_levels(band.height, band.width)
    if levels < 1 or levels > feasible:
        raise WaveletLevelsError(
            f"Cannot decompose a {band.width}x{band.height} band into {levels} levels; "
            f"choose between 1 and {feasible}"
        )
    details = []
    current = band
    for level in range(levels):
        analyzed = haar_analyze_level(current)
        details.append(analyzed.details)
        current = analyzed.approx
        logger.debug("Haar level analyzed", level=level + 1, width=current.width, height=current.height)
    return WaveletPyramid(approx=current, details=tuple(details))


def reconstruct(pyramid: WaveletPyramid) -> Band:
    """Fold the synthesis from the coarsest level back to the finest"""
    current = pyramid.approx
    for index in range(pyramid.levels - 1, -1, -1):
        level = pyramid.details[index]
        if current.shape != level.shape:
            raise InvalidArgumentError(
                f"Pyramid level {index + 1} details are {level.shape[1]}x{level.shape[0]} "
                f"but the coarser plane is {current.width}x{current.height}"
            )
        current = haar_synthesize_level(current, level.horizontal, level.vertical, level.diagonal, level.padding)
    return current


def inject_details(band: Band, donor: Band, levels: int = DEFAULT_LEVELS) -> Band:
    """Keep the approximation of ``band`` and take every detail plane from ``donor``"""
    if band.shape != donor.shape:
        raise InvalidArgumentError(
            f"Detail donor is {donor.width}x{donor.height}, band is {band.width}x{band.height}"
        )
    base = decompose(band, levels)
    details = decompose(donor, levels).details
    return reconstruct(base.with_details(details))


def fuse_wavelet_substitutive(fusion_input: FusionInput, levels: int = DEFAULT_LEVELS) -> MultiBandImage:
    """
    Per band: histogram-match PAN to the band, decompose both, replace the
    band's detail planes with the matched PAN's, and synthesize.
    """
    pan = fusion_input.pan
    fused = []
    for index, band in enumerate(fusion_input.ms):
        matched_pan = histogram_match(pan, band)
        fused.append(inject_details(band, matched_pan, levels))
        logger.debug("Wavelet band fused", band=index + 1, levels=levels)
    return MultiBandImage.from_bands(fused)

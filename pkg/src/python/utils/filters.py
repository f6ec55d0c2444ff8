"""
Frequency filtering fusion: box low-pass / high-pass kernels, unsharp masking,
high-boost filtering and the HPFA, HFA and HFM methods
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.ndimage as ndimage
import structlog

from src.python.errors import InvalidArgumentError, InvalidDataError
from src.python.models.raster import Band, MultiBandImage
from src.python.utils.arithmetic import FusionInput

logger = structlog.get_logger(__file__)

DEFAULT_KERNEL_SIZE = 3
DEFAULT_BOOST = 1.0
HFM_EPSILON = 1e-9


def _check_size(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise InvalidArgumentError(f"Kernel size must be an odd integer >= 3, got {n}")


@dataclass(frozen=True, eq=False)
class Kernel:
    """Square n x n weight grid; the response is ``normalization * sum(weights * window)``"""

    weights: np.ndarray
    normalization: float = 1.0

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64, copy=True)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise InvalidArgumentError(f"Kernel must be square, got shape {weights.shape}")
        _check_size(weights.shape[0])
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def center(self) -> int:
        return self.size // 2

    @classmethod
    def lowpass(cls, n: int = DEFAULT_KERNEL_SIZE) -> Kernel:
        """Box average: all ones, scaled by 1/n^2"""
        _check_size(n)
        return cls(np.ones((n, n)), 1.0 / (n * n))

    @classmethod
    def highpass(cls, n: int = DEFAULT_KERNEL_SIZE, normalized: bool = True) -> Kernel:
        """-1 everywhere, center n^2 - 1; scaled by 1/n^2 unless ``normalized`` is off"""
        _check_size(n)
        weights = -np.ones((n, n))
        weights[n // 2, n // 2] = n * n - 1
        return cls(weights, 1.0 / (n * n) if normalized else 1.0)


def convolve2d(band: Band, kernel: Kernel) -> Band:
    """
    Correlate ``band`` with ``kernel`` using replicate (clamp-to-edge) padding.

    The normalization factor is applied after the weighted sum.
    """
    # ndimage "nearest" extends the edge sample, which is replicate padding
    acc = ndimage.correlate(band.samples, kernel.weights, mode="nearest")
    return Band(kernel.normalization * acc)


def lowpass(pan: Band, n: int = DEFAULT_KERNEL_SIZE) -> Band:
    return convolve2d(pan, Kernel.lowpass(n))


def highpass(pan: Band, n: int = DEFAULT_KERNEL_SIZE, normalized: bool = True) -> Band:
    return convolve2d(pan, Kernel.highpass(n, normalized))


def unsharp_mask(pan: Band, n: int = DEFAULT_KERNEL_SIZE) -> Band:
    """P - P_LPF"""
    return Band(pan.samples - lowpass(pan, n).samples)


def high_boost(pan: Band, a: float = DEFAULT_BOOST, n: int = DEFAULT_KERNEL_SIZE) -> Band:
    """a * P - P_LPF; a = 1 is the unsharp mask"""
    if a < 0:
        raise InvalidArgumentError(f"Boost factor must be non-negative, got {a}")
    return Band(a * pan.samples - lowpass(pan, n).samples)


def _add_to_bands(ms: MultiBandImage, detail: np.ndarray, scale: float = 1.0) -> MultiBandImage:
    return MultiBandImage.from_array((ms.to_array() + detail) * scale)


def fuse_hpfa(fusion_input: FusionInput, n: int = DEFAULT_KERNEL_SIZE, normalized: bool = True) -> MultiBandImage:
    """F_k = (M_k + P_HPF) / 2"""
    detail = highpass(fusion_input.pan, n, normalized).samples
    return _add_to_bands(fusion_input.ms, detail, 0.5)


def fuse_hfa(
    fusion_input: FusionInput, n: int = DEFAULT_KERNEL_SIZE, boost: float = DEFAULT_BOOST
) -> MultiBandImage:
    """F_k = M_k + P_USM (the high-boost residual when ``boost`` != 1)"""
    detail = high_boost(fusion_input.pan, boost, n).samples
    return _add_to_bands(fusion_input.ms, detail)


def modulation_ratio(pan: Band, n: int = DEFAULT_KERNEL_SIZE) -> Band:
    """P / P_LPF, forced to 1 where the low-pass response is below HFM_EPSILON"""
    if (pan.samples < 0).any():
        raise InvalidDataError("HFM needs a non-negative PAN band")
    smooth = lowpass(pan, n).samples
    guarded = smooth < HFM_EPSILON
    if guarded.any():
        logger.warning("HFM guard applied to near-zero low-pass pixels", pixels=int(guarded.sum()))
    ratio = np.divide(pan.samples, smooth, out=np.ones_like(smooth), where=~guarded)
    return Band(ratio)


def fuse_hfm(fusion_input: FusionInput, n: int = DEFAULT_KERNEL_SIZE) -> MultiBandImage:
    """F_k = M_k * P / P_LPF"""
    ratio = modulation_ratio(fusion_input.pan, n).samples
    return MultiBandImage.from_array(fusion_input.ms_stack() * ratio)

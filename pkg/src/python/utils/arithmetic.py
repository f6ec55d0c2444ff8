"""
Arithmetic combination fusion: Brovey (BT), Color Normalized (CN) and
Multiplicative (MLT)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog

from src.python.errors import InvalidArgumentError, InvalidDataError
from src.python.models.raster import Band, MultiBandImage
from src.python.utils.raster import resample_nearest

logger = structlog.get_logger(__file__)

# CN offset for the three-band case; K bands use K instead
CN_RGB_CONSTANT = 3.0


@dataclass(frozen=True, eq=False)
class FusionInput:
    """A PAN band and an MS image already resampled to the PAN geometry"""

    pan: Band
    ms: MultiBandImage

    def __post_init__(self):
        if self.pan.shape != self.ms.shape:
            raise InvalidArgumentError(
                f"PAN is {self.pan.width}x{self.pan.height} but MS is {self.ms.width}x{self.ms.height}; "
                "resample the MS image first"
            )

    @classmethod
    def aligned(cls, pan: Band, ms: MultiBandImage) -> FusionInput:
        """Resample ``ms`` onto the PAN grid (nearest neighbor) when needed"""
        if ms.shape != pan.shape:
            ms = resample_nearest(ms, pan.width, pan.height)
        return cls(pan=pan, ms=ms)

    @property
    def band_count(self) -> int:
        return len(self.ms)

    def ms_stack(self) -> np.ndarray:
        return self.ms.to_array()


def fuse_brovey(fusion_input: FusionInput) -> MultiBandImage:
    """F_k = M_k * P / sum(M); pixels with zero band sum are set to 0"""
    ms = fusion_input.ms_stack()
    pan = fusion_input.pan.samples
    total = ms.sum(axis=0)
    empty = total == 0
    if empty.any():
        logger.warning("Brovey zero band-sum pixels set to 0", pixels=int(empty.sum()))
    ratio = np.divide(pan, total, out=np.zeros_like(pan), where=~empty)
    fused = ms * ratio
    return MultiBandImage.from_array(fused)


def fuse_color_normalized(fusion_input: FusionInput) -> MultiBandImage:
    """F_k = (M_k + 1)(P + 1) K / (sum(M) + K) - 1, with K = 3.0 for RGB"""
    ms = fusion_input.ms_stack()
    pan = fusion_input.pan.samples
    k = CN_RGB_CONSTANT if fusion_input.band_count == 3 else float(fusion_input.band_count)
    fused = (ms + 1.0) * (pan + 1.0) * k / (ms.sum(axis=0) + k) - 1.0
    return MultiBandImage.from_array(fused)


def fuse_multiplicative(fusion_input: FusionInput) -> MultiBandImage:
    """F_k = sqrt(M_k * P)"""
    ms = fusion_input.ms_stack()
    pan = fusion_input.pan.samples
    if (ms < 0).any() or (pan < 0).any():
        raise InvalidDataError("Multiplicative fusion needs non-negative PAN and MS samples")
    return MultiBandImage.from_array(np.sqrt(ms * pan))

"""
Fusion quality indices: SD, En, CC, SNR, NRMSE and DI, plus per-band report
assembly. Argument order is always (fused, reference).
"""

import math
from typing import Callable, Dict, Optional

import numpy as np
import structlog

from src.python.errors import BandCountError, DegenerateStatisticsError, InvalidArgumentError, PansharpError
from src.python.models.models import BandMetrics, MetricsReport
from src.python.models.raster import Band, MultiBandImage
from src.python.utils.raster import histogram256, quantize

logger = structlog.get_logger(__file__)

NRMSE_SCALE = 255.0


def _check_pair(fused: Band, reference: Band) -> None:
    if fused.shape != reference.shape:
        raise InvalidArgumentError(
            f"Fused band is {fused.width}x{fused.height}, reference is {reference.width}x{reference.height}"
        )


def std_dev(band: Band) -> float:
    """Population standard deviation (divisor m*n)"""
    x = band.samples
    return float(np.sqrt(np.sum((x - x.mean()) ** 2) / x.size))


def entropy(band: Band) -> float:
    """Shannon entropy in bits of the 256-level histogram; input must be quantized"""
    p = histogram256(band).probabilities()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def correlation(fused: Band, reference: Band) -> float:
    _check_pair(fused, reference)
    a = fused.samples - fused.samples.mean()
    b = reference.samples - reference.samples.mean()
    saa = np.sum(a * a)
    sbb = np.sum(b * b)
    if saa == 0 or sbb == 0:
        which = "fused" if saa == 0 else "reference"
        raise DegenerateStatisticsError(f"Correlation undefined: {which} band has zero variance")
    return float(np.sum(a * b) / (np.sqrt(saa) * np.sqrt(sbb)))


def snr(fused: Band, reference: Band) -> float:
    """sqrt(sum F^2 / sum (F - M)^2); infinite when the bands are identical"""
    _check_pair(fused, reference)
    noise = np.sum((fused.samples - reference.samples) ** 2)
    if noise == 0:
        return math.inf
    return float(np.sqrt(np.sum(fused.samples**2) / noise))


def nrmse(fused: Band, reference: Band) -> float:
    _check_pair(fused, reference)
    squared = np.sum((fused.samples - reference.samples) ** 2)
    return float(np.sqrt(squared / (fused.pixel_count * NRMSE_SCALE**2)))


def deviation_excluded_pixels(reference: Band) -> int:
    """Reference pixels left out of DI (non-positive DN)"""
    return int(np.count_nonzero(reference.samples <= 0))


def deviation_index(fused: Band, reference: Band) -> float:
    """Mean of |F - M| / M over reference pixels with M > 0"""
    _check_pair(fused, reference)
    m = reference.samples
    valid = m > 0
    if not valid.any():
        raise DegenerateStatisticsError("Deviation index undefined: every reference pixel is zero")
    f = fused.samples
    return float(np.mean(np.abs(f[valid] - m[valid]) / m[valid]))


def _guarded(errors: Dict[str, str], name: str, compute: Callable[[], float]) -> Optional[float]:
    try:
        return compute()
    except PansharpError as e:
        logger.warning("Metric cell marked degenerate", metric=name, error=e.detail)
        errors[name] = e.detail
        return None


def assess_band(index: int, fused: Band, reference: Band, quantized: bool = False) -> BandMetrics:
    _check_pair(fused, reference)
    fused_q = quantize(fused)
    if quantized:
        fused, reference = fused_q, quantize(reference)
    errors: Dict[str, str] = {}
    return BandMetrics(
        band=index,
        sd=_guarded(errors, "SD", lambda: std_dev(fused)),
        entropy=_guarded(errors, "En", lambda: entropy(fused_q)),
        cc=_guarded(errors, "CC", lambda: correlation(fused, reference)),
        snr=_guarded(errors, "SNR", lambda: snr(fused, reference)),
        nrmse=_guarded(errors, "NRMSE", lambda: nrmse(fused, reference)),
        di=_guarded(errors, "DI", lambda: deviation_index(fused, reference)),
        pixel_count=fused.pixel_count,
        di_excluded_pixels=deviation_excluded_pixels(reference),
        errors=errors,
    )


def assess(
    fused: MultiBandImage, reference: MultiBandImage, method: str = "FUSED", quantized: bool = False
) -> MetricsReport:
    """All six indices per band; a failing metric marks its cell instead of aborting"""
    if len(fused) != len(reference):
        raise BandCountError(f"Fused image has {len(fused)} bands, reference has {len(reference)}")
    if fused.shape != reference.shape:
        raise InvalidArgumentError(
            f"Fused image is {fused.width}x{fused.height}, reference is {reference.width}x{reference.height}"
        )
    logger.info("Assessing fused image", method=method, bands=len(fused), quantized=quantized)
    rows = [assess_band(k + 1, f, r, quantized) for k, (f, r) in enumerate(zip(fused, reference))]
    return MetricsReport(method=method, bands=rows)

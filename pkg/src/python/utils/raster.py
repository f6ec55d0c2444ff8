"""
Raster plumbing: nearest-neighbor resampling, quantization, histograms,
histogram matching and bit-depth rescaling
"""

import numpy as np
import structlog

from src.python.errors import InvalidArgumentError, InvalidDataError
from src.python.models.raster import (
    DEFAULT_POLICY,
    HISTOGRAM_LEVELS,
    Band,
    Histogram,
    MultiBandImage,
    QuantizationPolicy,
)

logger = structlog.get_logger(__file__)


def _nearest_indices(source_size: int, target_size: int) -> np.ndarray:
    # floor((i + 0.5) * src / dst) in exact integer arithmetic
    i = np.arange(target_size, dtype=np.int64)
    return ((2 * i + 1) * source_size) // (2 * target_size)


def _check_target(target_width: int, target_height: int) -> None:
    if target_width < 1 or target_height < 1:
        raise InvalidArgumentError(f"Target dimensions must be positive, got {target_width}x{target_height}")


def resample_band_nearest(band: Band, target_width: int, target_height: int) -> Band:
    _check_target(target_width, target_height)
    rows = _nearest_indices(band.height, target_height)
    cols = _nearest_indices(band.width, target_width)
    return Band(band.samples[np.ix_(rows, cols)])


def resample_nearest(ms: MultiBandImage, target_width: int, target_height: int) -> MultiBandImage:
    """Upsample every band to the target geometry with pixel-center nearest neighbor"""
    _check_target(target_width, target_height)
    if target_width < ms.width or target_height < ms.height:
        raise InvalidArgumentError(
            f"Nearest-neighbor resampling only upsamples: {ms.width}x{ms.height} -> {target_width}x{target_height}"
        )
    logger.debug(
        "Resampling image", source=f"{ms.width}x{ms.height}", target=f"{target_width}x{target_height}", bands=len(ms)
    )
    return MultiBandImage.from_bands([resample_band_nearest(b, target_width, target_height) for b in ms])


def decimate_box(band: Band, factor: int) -> Band:
    """Average factor x factor blocks; the trailing partial block is replicate-padded"""
    if factor < 1:
        raise InvalidArgumentError(f"Decimation factor must be >= 1, got {factor}")
    height, width = band.shape
    out_h = -(-height // factor)
    out_w = -(-width // factor)
    padded = np.pad(band.samples, ((0, out_h * factor - height), (0, out_w * factor - width)), mode="edge")
    blocks = padded.reshape(out_h, factor, out_w, factor)
    return Band(blocks.mean(axis=(1, 3)))


def quantize(band: Band, policy: QuantizationPolicy = DEFAULT_POLICY) -> Band:
    """Clamp to the policy range and round half away from zero"""
    samples = band.samples
    if np.isnan(samples).any():
        raise InvalidDataError("Cannot quantize NaN samples")
    clamped = np.clip(samples, policy.lo, policy.hi)
    # compare the fractional part; adding 0.5 first would round 0.49999999999999994 up
    magnitude = np.abs(clamped)
    whole = np.floor(magnitude)
    rounded = np.sign(clamped) * (whole + (magnitude - whole >= 0.5))
    return Band(rounded + 0.0)


def quantize_image(img: MultiBandImage, policy: QuantizationPolicy = DEFAULT_POLICY) -> MultiBandImage:
    return MultiBandImage.from_bands([quantize(b, policy) for b in img])


def _require_8bit(band: Band) -> np.ndarray:
    samples = band.samples
    if not band.is_integral():
        raise InvalidDataError("Histogram input must be integral; quantize the band first")
    if samples.min() < 0 or samples.max() > HISTOGRAM_LEVELS - 1:
        raise InvalidDataError(
            f"Histogram input must lie in 0..{HISTOGRAM_LEVELS - 1}, got {samples.min()}..{samples.max()}"
        )
    return samples.astype(np.int64)


def histogram256(band: Band) -> Histogram:
    levels = _require_8bit(band)
    return Histogram(np.bincount(levels.ravel(), minlength=HISTOGRAM_LEVELS))


def matching_lookup(source: Histogram, reference: Histogram) -> np.ndarray:
    """
    Level map for CDF matching: each source level v goes to the smallest
    reference level r with CDF_ref(r) >= CDF_src(v).
    """
    # compare cum_ref[r] / n_ref >= cum_src[v] / n_src without rounding
    scaled_ref = reference.cumulative() * source.total
    scaled_src = source.cumulative() * reference.total
    lookup = np.searchsorted(scaled_ref, scaled_src, side="left")
    return np.minimum(lookup, HISTOGRAM_LEVELS - 1)


def histogram_match(source: Band, reference: Band) -> Band:
    """Reference-stretch ``source`` so its histogram follows ``reference``"""
    if source.pixel_count == 0 or reference.pixel_count == 0:
        raise InvalidArgumentError("Histogram matching needs non-empty bands")
    source_q = quantize(source)
    reference_q = quantize(reference)
    lookup = matching_lookup(histogram256(source_q), histogram256(reference_q))
    matched = lookup[source_q.samples.astype(np.int64)]
    return Band(matched.astype(np.float64))


def rescale_bit_depth(band: Band, bits: int) -> Band:
    """Linearly stretch an n-bit band (0..2^bits - 1) onto 0..255"""
    if not 1 <= bits <= 16:
        raise InvalidArgumentError(f"Bit depth must be within 1..16, got {bits}")
    if bits == 8:
        return band
    top = float(2**bits - 1)
    if band.samples.min() < 0 or band.samples.max() > top:
        raise InvalidDataError(f"Samples exceed the {bits}-bit range 0..{int(top)}")
    return Band(band.samples * (255.0 / top))

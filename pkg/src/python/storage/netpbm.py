"""
Portable graymap / pixmap codec (P2, P3, P5, P6) with 8-bit maxval
"""

from __future__ import annotations

import re
import textwrap
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import structlog

from src.python.errors import BandCountError, ImageFormatError
from src.python.models.raster import MultiBandImage
from src.python.utils.raster import quantize_image

logger = structlog.get_logger(__file__)

MAXVAL = 255
PLAIN_LINE_WIDTH = 70

# a comment runs to end of line; anything else is a whitespace-delimited token
_TOKEN = re.compile(rb"#[^\r\n]*|[^\s#]+")
_WHITESPACE = b" \t\r\n\v\f"


class ImageFormat(str, Enum):
    P2 = "P2"  # plain graymap
    P3 = "P3"  # plain pixmap
    P5 = "P5"  # binary graymap
    P6 = "P6"  # binary pixmap

    @property
    def band_count(self) -> int:
        return 1 if self in (ImageFormat.P2, ImageFormat.P5) else 3

    @property
    def binary(self) -> bool:
        return self in (ImageFormat.P5, ImageFormat.P6)

    @classmethod
    def for_bands(cls, band_count: int, plain: bool = False) -> ImageFormat:
        if band_count == 1:
            return cls.P2 if plain else cls.P5
        if band_count == 3:
            return cls.P3 if plain else cls.P6
        raise BandCountError(f"Netpbm stores 1 or 3 bands, image has {band_count}")


def _tokens(data: bytes, start: int):
    for match in _TOKEN.finditer(data, start):
        if match.group().startswith(b"#"):
            continue
        yield match


def _parse_int(token: bytes, offset: int, what: str) -> int:
    if not token.isdigit():
        raise ImageFormatError(f"Invalid {what} {token[:16]!r}", offset=offset)
    return int(token)


def _read_header(data: bytes) -> Tuple[ImageFormat, int, int, int]:
    """Returns (format, width, height, end offset of the maxval token)"""
    if len(data) < 2:
        raise ImageFormatError("File too short for a Netpbm magic number", offset=0)
    try:
        image_format = ImageFormat(data[:2].decode("ascii"))
    except (UnicodeDecodeError, ValueError):
        raise ImageFormatError(f"Unsupported magic number {data[:2]!r}", offset=0)

    fields: List[int] = []
    names = ("width", "height", "maxval")
    end = 2
    for match in _tokens(data, 2):
        fields.append(_parse_int(match.group(), match.start(), names[len(fields)]))
        end = match.end()
        if len(fields) == 3:
            break
    if len(fields) < 3:
        raise ImageFormatError(f"Header ends before {names[len(fields)]}", offset=len(data))

    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"Image dimensions must be positive, got {width}x{height}", offset=2)
    if maxval != MAXVAL:
        raise ImageFormatError(f"Only maxval {MAXVAL} is supported, got {maxval}", offset=end)
    return image_format, width, height, end


def _decode_binary(data: bytes, start: int, count: int) -> np.ndarray:
    available = len(data) - start
    if available < count:
        raise ImageFormatError(f"Truncated payload: expected {count} bytes, found {max(available, 0)}", offset=len(data))
    if available > count:
        logger.debug("Ignoring trailing bytes after payload", extra_bytes=available - count)
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=start)


def _decode_plain(data: bytes, start: int, count: int) -> np.ndarray:
    # every sample needs at least one byte; reject before sizing the buffer from the header
    available = len(data) - start
    if count > available:
        raise ImageFormatError(
            f"Truncated payload: {count} samples cannot fit in {max(available, 0)} bytes", offset=len(data)
        )
    values = np.empty(count, dtype=np.uint8)
    filled = 0
    for match in _tokens(data, start):
        if filled == count:
            break
        value = _parse_int(match.group(), match.start(), "sample")
        if value > MAXVAL:
            raise ImageFormatError(f"Sample {value} exceeds maxval {MAXVAL}", offset=match.start())
        values[filled] = value
        filled += 1
    if filled < count:
        raise ImageFormatError(f"Truncated payload: expected {count} samples, found {filled}", offset=len(data))
    return values


def decode_image(data: bytes, image_format: Optional[ImageFormat] = None) -> MultiBandImage:
    """Decode a PGM/PPM byte string into float64 bands; ``image_format`` pins the expected magic"""
    found, width, height, end = _read_header(data)
    if image_format is not None and ImageFormat(image_format) != found:
        raise ImageFormatError(f"Expected {ImageFormat(image_format).value} data, found {found.value}", offset=0)

    bands = found.band_count
    count = width * height * bands
    if found.binary:
        if end >= len(data) or data[end] not in _WHITESPACE:
            raise ImageFormatError("Missing whitespace between header and payload", offset=end)
        samples = _decode_binary(data, end + 1, count)
    else:
        samples = _decode_plain(data, end, count)

    # payload is row-major with samples interleaved per pixel
    planes = samples.reshape(height, width, bands).transpose(2, 0, 1).astype(np.float64)
    logger.debug("Decoded image", format=found.value, width=width, height=height, bands=bands)
    return MultiBandImage.from_array(planes)


def encode_image(img: MultiBandImage, image_format: Optional[ImageFormat] = None) -> bytes:
    """Quantize and encode; the default format is binary, picked by band count"""
    image_format = ImageFormat(image_format) if image_format is not None else ImageFormat.for_bands(len(img))
    if image_format.band_count != len(img):
        raise BandCountError(f"{image_format.value} stores {image_format.band_count} band(s), image has {len(img)}")

    pixels = quantize_image(img).to_array().transpose(1, 2, 0).astype(np.uint8)
    header = f"{image_format.value}\n{img.width} {img.height}\n{MAXVAL}\n".encode("ascii")
    if image_format.binary:
        return header + pixels.tobytes()

    lines: List[str] = []
    for row in pixels:
        lines.extend(textwrap.wrap(" ".join(str(v) for v in row.ravel()), PLAIN_LINE_WIDTH))
    return header + ("\n".join(lines) + "\n").encode("ascii")

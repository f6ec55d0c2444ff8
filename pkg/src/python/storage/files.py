"""
File access for rasters and reports.

Writes go to a temporary sibling file and are renamed into place only once the
whole payload is on disk, so a failed run never leaves a truncated output.
"""

import os
import tempfile
from pathlib import Path
from typing import Optional, Union

import structlog

from src.python.errors import RasterIOError
from src.python.models.raster import MultiBandImage
from src.python.storage.netpbm import ImageFormat, decode_image

logger = structlog.get_logger(__file__)

PathLike = Union[str, Path]


def read_bytes(path: PathLike) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        logger.error("Failed to read file", path=str(path), error=str(e))
        raise RasterIOError(f"Cannot read {path}: {e.strerror or e}")


def write_bytes_atomic(path: PathLike, payload: bytes) -> None:
    target = Path(path)
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(
            dir=target.parent, prefix=f".{target.name}.", suffix=".tmp", delete=False
        ) as handle:
            tmp_name = handle.name
            handle.write(payload)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, target)
        tmp_name = None
        logger.debug("File written", path=str(target), size=len(payload))
    except OSError as e:
        logger.error("Failed to write file", path=str(target), error=str(e))
        raise RasterIOError(f"Cannot write {target}: {e.strerror or e}")
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)


def write_text_atomic(path: PathLike, text: str) -> None:
    write_bytes_atomic(path, text.encode("utf-8"))


def read_image(path: PathLike, image_format: Optional[ImageFormat] = None) -> MultiBandImage:
    """Read and decode a PGM/PPM file"""
    img = decode_image(read_bytes(path), image_format)
    logger.info("Image loaded", path=str(path), width=img.width, height=img.height, bands=len(img))
    return img


"""
Error taxonomy for the pan-sharpening toolkit.

Every library error carries an ``exit_code`` and a ``detail`` message, the same
way the API layer used ``status_code`` / ``detail``. Only the CLI turns them into
process exit codes.
"""

from typing import Optional

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_DEGENERATE = 5
EXIT_INVALID_ARGUMENT = 6
EXIT_INVALID_DATA = 7
EXIT_BAND_COUNT = 8
EXIT_WAVELET_LEVELS = 9


class PansharpError(Exception):
    """Base class for all toolkit errors"""

    exit_code: int = EXIT_FAILURE

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidArgumentError(PansharpError, ValueError):
    """Bad parameter or incompatible geometry"""

    exit_code = EXIT_INVALID_ARGUMENT


class BandCountError(InvalidArgumentError):
    """Image has the wrong number of bands for the operation"""

    exit_code = EXIT_BAND_COUNT


class WaveletLevelsError(InvalidArgumentError):
    """Requested decomposition depth is not feasible for the band size"""

    exit_code = EXIT_WAVELET_LEVELS


class InvalidDataError(PansharpError, ValueError):
    """Sample values outside what an operation accepts (NaN, negative, non-integral)"""

    exit_code = EXIT_INVALID_DATA


class ImageFormatError(PansharpError):
    """Malformed or unsupported image file"""

    exit_code = EXIT_FORMAT

    def __init__(self, detail: str, offset: Optional[int] = None):
        if offset is not None:
            detail = f"{detail} (at byte offset {offset})"
        super().__init__(detail)
        self.offset = offset


class RasterIOError(PansharpError, OSError):
    """File could not be read or written"""

    exit_code = EXIT_IO


class DegenerateStatisticsError(PansharpError):
    """Statistic undefined for the given input (zero variance, all-zero reference)"""

    exit_code = EXIT_DEGENERATE

"""
Dispatch from a FusionMethod to the fusion routine that implements it
"""

from typing import Callable, Dict

import structlog

from src.python.models.models import FusionMethod, FusionParameters
from src.python.models.raster import MultiBandImage
from src.python.utils.arithmetic import FusionInput, fuse_brovey, fuse_color_normalized, fuse_multiplicative
from src.python.utils.filters import fuse_hfa, fuse_hfm, fuse_hpfa
from src.python.utils.wavelet import fuse_wavelet_substitutive

logger = structlog.get_logger(__file__)

FusionRoutine = Callable[[FusionInput, FusionParameters], MultiBandImage]

_ROUTINES: Dict[FusionMethod, FusionRoutine] = {
    FusionMethod.BROVEY: lambda fi, p: fuse_brovey(fi),
    FusionMethod.CN: lambda fi, p: fuse_color_normalized(fi),
    FusionMethod.MLT: lambda fi, p: fuse_multiplicative(fi),
    FusionMethod.HPFA: lambda fi, p: fuse_hpfa(fi, p.kernel_size, p.hpf_normalized),
    FusionMethod.HFA: lambda fi, p: fuse_hfa(fi, p.kernel_size, p.boost),
    FusionMethod.HFM: lambda fi, p: fuse_hfm(fi, p.kernel_size),
    FusionMethod.WAVELET: lambda fi, p: fuse_wavelet_substitutive(fi, p.levels),
}


def get_fusion_routine(method: FusionMethod) -> FusionRoutine:
    return _ROUTINES[FusionMethod(method)]


def fuse(method: FusionMethod, fusion_input: FusionInput, params: FusionParameters) -> MultiBandImage:
    """Run one fusion method with the given parameters"""
    method = FusionMethod(method)
    logger.info(
        "Fusing image",
        method=method.value,
        bands=fusion_input.band_count,
        width=fusion_input.pan.width,
        height=fusion_input.pan.height,
    )
    return get_fusion_routine(method)(fusion_input, params)

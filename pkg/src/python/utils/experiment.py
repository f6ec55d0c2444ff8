"""
Reduced-resolution comparison of all fusion methods.

A 3-band reference image is degraded into a synthetic (PAN, MS) pair: PAN is
the unweighted band mean at full resolution, MS is the box-averaged reference
decimated by ``factor`` and brought back with nearest neighbor. Every method
is then scored against the untouched reference.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import structlog

from src.python.errors import BandCountError, InvalidArgumentError
from src.python.models.models import ExperimentSpec, FusionMethod, MetricsReport, RankingEntry
from src.python.models.raster import Band, MultiBandImage
from src.python.utils.arithmetic import FusionInput
from src.python.utils.fusion import fuse
from src.python.utils.metrics import assess
from src.python.utils.raster import decimate_box

logger = structlog.get_logger(__file__)

ORIGINAL_LABEL = "ORIGINAL"
REFERENCE_BANDS = 3

# (report label, metric field, higher is better)
RANKED_INDICES: List[Tuple[str, str, bool]] = [
    ("SD", "sd", True),
    ("En", "entropy", True),
    ("CC", "cc", True),
    ("SNR", "snr", True),
    ("NRMSE", "nrmse", False),
    ("DI", "di", False),
]


@dataclass(frozen=True)
class ExperimentResult:
    reports: List[MetricsReport]
    ranking: List[RankingEntry]


def synthesize_pan(reference: MultiBandImage, noise: float = 0.0, seed: Optional[int] = None) -> Band:
    """Band mean, optionally with additive Gaussian noise (clipped at 0)"""
    pan = reference.to_array().mean(axis=0)
    if noise > 0:
        rng = np.random.default_rng(seed)
        pan = np.maximum(pan + rng.normal(0.0, noise, size=pan.shape), 0.0)
    return Band(pan)


def degrade_ms(reference: MultiBandImage, factor: int) -> MultiBandImage:
    """Box blur of width ``factor`` and decimation, per band"""
    if reference.width < factor or reference.height < factor:
        raise InvalidArgumentError(
            f"Reference {reference.width}x{reference.height} is too small for downsample factor {factor}"
        )
    return MultiBandImage.from_bands([decimate_box(band, factor) for band in reference])


def simulate_pair(
    reference: MultiBandImage, factor: int, noise: float = 0.0, seed: Optional[int] = None
) -> FusionInput:
    low_ms = degrade_ms(reference, factor)
    pan = synthesize_pan(reference, noise, seed)
    logger.info(
        "Simulated PAN/MS pair",
        factor=factor,
        pan=f"{pan.width}x{pan.height}",
        ms=f"{low_ms.width}x{low_ms.height}",
    )
    return FusionInput.aligned(pan, low_ms)


def band_mean(report: MetricsReport, field: str) -> Optional[float]:
    """Mean of one metric across bands, None when any band is degenerate"""
    values = [getattr(metrics, field) for metrics in report.bands]
    if any(v is None for v in values):
        return None
    if any(math.isinf(v) for v in values):
        return math.inf
    return sum(values) / len(values)


def rank_methods(reports: List[MetricsReport]) -> List[RankingEntry]:
    """Order methods per index by band-mean value; degenerate means rank last, unranked"""
    entries: List[RankingEntry] = []
    for label, field, higher_is_better in RANKED_INDICES:
        scored = [(report.method, band_mean(report, field)) for report in reports]
        valid = [item for item in scored if item[1] is not None]
        # stable sort keeps report order on ties
        valid.sort(key=lambda item: -item[1] if higher_is_better else item[1])
        for rank, (method, mean) in enumerate(valid, start=1):
            entries.append(RankingEntry(index=label, method=method, mean=mean, rank=rank))
        for method, mean in scored:
            if mean is None:
                entries.append(RankingEntry(index=label, method=method))
    return entries


def run_experiment(spec: ExperimentSpec, reference: MultiBandImage) -> ExperimentResult:
    """Fuse with every requested method and assess each against the reference"""
    if len(reference) != REFERENCE_BANDS:
        raise BandCountError(f"Experiment reference must have {REFERENCE_BANDS} bands, got {len(reference)}")
    fusion_input = simulate_pair(reference, spec.factor, spec.noise, spec.seed)
    quantized = spec.metrics_on_quantized

    def evaluate(method: FusionMethod) -> MetricsReport:
        fused = fuse(method, fusion_input, spec)
        return assess(fused, reference, method=method.label, quantized=quantized)

    logger.info("Running experiment", methods=[m.value for m in spec.methods], workers=spec.workers)
    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        method_reports = list(pool.map(evaluate, spec.methods))

    original = assess(reference, reference, method=ORIGINAL_LABEL, quantized=quantized)
    ranking = rank_methods(method_reports)
    for entry in ranking:
        if entry.rank == 1:
            logger.info("Best method", index=entry.index, method=entry.method, mean=entry.mean)
    return ExperimentResult(reports=[original] + method_reports, ranking=ranking)

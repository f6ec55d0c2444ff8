"""
Pipelines behind the command-line front end.

Each command computes every output payload in memory first and only then
writes the files, atomically, so an error never leaves a partial result.
"""

from pathlib import Path
from typing import List, Optional, Tuple

import structlog

from src.python.errors import BandCountError
from src.python.models.models import ExperimentSpec, MetricsReport, ReportFormat, RunConfig
from src.python.models.raster import MultiBandImage
from src.python.storage.files import read_image, write_bytes_atomic, write_text_atomic
from src.python.storage.netpbm import ImageFormat, encode_image
from src.python.utils.arithmetic import FusionInput
from src.python.utils.experiment import ExperimentResult, run_experiment
from src.python.utils.fusion import fuse
from src.python.utils.metrics import assess
from src.python.utils.raster import quantize_image, rescale_bit_depth, resample_nearest
from src.python.utils.report_processor import get_report_processor

logger = structlog.get_logger(__file__)


def _load_reference(path: Path, width: int, height: int) -> MultiBandImage:
    reference = read_image(path)
    if reference.shape != (height, width):
        logger.info(
            "Resampling reference to PAN geometry",
            source=f"{reference.width}x{reference.height}",
            target=f"{width}x{height}",
        )
        reference = resample_nearest(reference, width, height)
    return reference


def cmd_fuse(config: RunConfig) -> Tuple[MultiBandImage, Optional[MetricsReport]]:
    """Decode, resample, fuse, quantize, encode and optionally assess"""
    logger.info("Starting fusion run", method=config.method.value, pan=str(config.pan_path), ms=str(config.ms_path))

    pan_image = read_image(config.pan_path)
    if len(pan_image) != 1:
        raise BandCountError(f"PAN image must have 1 band, {config.pan_path} has {len(pan_image)}")
    pan = rescale_bit_depth(pan_image[0], config.pan_bits)
    ms = read_image(config.ms_path)
    output_format = ImageFormat.for_bands(len(ms), config.plain)

    fusion_input = FusionInput.aligned(pan, ms)
    fused = fuse(config.method, fusion_input, config)
    payload = encode_image(fused, output_format)

    report = None
    report_text = None
    if config.reference_path is not None:
        reference = _load_reference(config.reference_path, pan.width, pan.height)
        report = assess(fused, reference, method=config.method.label, quantized=config.metrics_on_quantized)
        report_text = get_report_processor().render([report], config.report_format)

    write_bytes_atomic(config.out_path, payload)
    logger.info("Fused image written", path=str(config.out_path), format=output_format.value)
    if report_text is not None:
        write_text_atomic(config.report_path, report_text)
        logger.info("Report written", path=str(config.report_path), format=config.report_format.value)
    return quantize_image(fused), report


def cmd_metrics(
    fused_path: Path,
    reference_path: Path,
    report_path: Path,
    report_format: ReportFormat = ReportFormat.JSON,
    label: str = "FUSED",
    quantized: bool = False,
) -> MetricsReport:
    """Assess a stored fused image against a stored reference"""
    fused = read_image(fused_path)
    reference = read_image(reference_path)
    report = assess(fused, reference, method=label, quantized=quantized)
    write_text_atomic(report_path, get_report_processor().render([report], report_format))
    logger.info("Report written", path=str(report_path), format=ReportFormat(report_format).value)
    return report


def cmd_experiment(spec: ExperimentSpec) -> List[MetricsReport]:
    """Degrade the reference, run every method and write the comparison report"""
    reference = read_image(spec.reference_path)
    result: ExperimentResult = run_experiment(spec, reference)

    processor = get_report_processor()
    report_text = processor.render(result.reports, spec.report_format)
    ranking_text = processor.ranking_to_csv(result.ranking) if spec.ranking_path is not None else None

    write_text_atomic(spec.report_path, report_text)
    logger.info("Report written", path=str(spec.report_path), rows=sum(r.band_count for r in result.reports))
    if ranking_text is not None:
        write_text_atomic(spec.ranking_path, ranking_text)
        logger.info("Ranking written", path=str(spec.ranking_path), entries=len(result.ranking))
    return result.reports

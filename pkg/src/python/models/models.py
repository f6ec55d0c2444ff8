from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from src.python.utils.filters import DEFAULT_BOOST, DEFAULT_KERNEL_SIZE
from src.python.utils.wavelet import DEFAULT_LEVELS

DEFAULT_FACTOR = 5


class FusionMethod(str, Enum):
    BROVEY = "brovey"
    CN = "cn"
    MLT = "mlt"
    HPFA = "hpfa"
    HFA = "hfa"
    HFM = "hfm"
    WAVELET = "wavelet"

    @property
    def label(self) -> str:
        """Short name used in report rows"""
        return _METHOD_LABELS[self]


_METHOD_LABELS = {
    FusionMethod.BROVEY: "BT",
    FusionMethod.CN: "CN",
    FusionMethod.MLT: "MLT",
    FusionMethod.HPFA: "HPFA",
    FusionMethod.HFA: "HFA",
    FusionMethod.HFM: "HFM",
    FusionMethod.WAVELET: "WT",
}

ALL_METHODS: List[FusionMethod] = list(FusionMethod)


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


# Fusion parameters shared by `fuse` and `experiment`
class FusionParameters(BaseModel):
    model_config = ConfigDict(frozen=True)

    kernel_size: int = DEFAULT_KERNEL_SIZE
    levels: int = DEFAULT_LEVELS
    boost: float = DEFAULT_BOOST
    hpf_normalized: bool = True
    metrics_on_quantized: bool = False

    @field_validator("kernel_size")
    @classmethod
    def check_kernel_size(cls, value: int) -> int:
        if value < 3 or value % 2 == 0:
            raise ValueError("kernel size must be an odd integer >= 3")
        return value

    @field_validator("levels")
    @classmethod
    def check_levels(cls, value: int) -> int:
        if value < 1:
            raise ValueError("wavelet levels must be >= 1")
        return value

    @field_validator("boost")
    @classmethod
    def check_boost(cls, value: float) -> float:
        if value < 0 or not math.isfinite(value):
            raise ValueError("boost factor must be a finite value >= 0")
        return value


class RunConfig(FusionParameters):
    method: FusionMethod
    pan_path: Path
    ms_path: Path
    out_path: Path
    pan_bits: int = 8
    plain: bool = False
    reference_path: Optional[Path] = None
    report_path: Optional[Path] = None
    report_format: ReportFormat = ReportFormat.JSON

    @field_validator("pan_bits")
    @classmethod
    def check_pan_bits(cls, value: int) -> int:
        if not 1 <= value <= 16:
            raise ValueError("PAN bit depth must be within 1..16")
        return value

    @model_validator(mode="after")
    def check_report_pairing(self) -> RunConfig:
        if (self.reference_path is None) != (self.report_path is None):
            raise ValueError("--reference and --report must be given together")
        return self


class ExperimentSpec(FusionParameters):
    reference_path: Path
    report_path: Path
    factor: int = DEFAULT_FACTOR
    methods: List[FusionMethod] = Field(default_factory=lambda: list(ALL_METHODS))
    report_format: ReportFormat = ReportFormat.JSON
    ranking_path: Optional[Path] = None
    workers: int = 1
    seed: Optional[int] = None
    noise: float = 0.0

    @field_validator("factor")
    @classmethod
    def check_factor(cls, value: int) -> int:
        if value < 2:
            raise ValueError("downsample factor must be >= 2")
        return value

    @field_validator("workers")
    @classmethod
    def check_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be >= 1")
        return value

    @field_validator("noise")
    @classmethod
    def check_noise(cls, value: float) -> float:
        if value < 0:
            raise ValueError("noise sigma must be >= 0")
        return value

    @field_validator("methods")
    @classmethod
    def order_methods(cls, value: List[FusionMethod]) -> List[FusionMethod]:
        if not value:
            raise ValueError("at least one method is required")
        # report rows follow the fixed method order regardless of CLI order
        return [m for m in ALL_METHODS if m in set(value)]


# Metrics report schemas
class BandMetrics(BaseModel):
    band: int
    sd: Optional[float] = None
    entropy: Optional[float] = None
    cc: Optional[float] = None
    snr: Optional[float] = None
    nrmse: Optional[float] = None
    di: Optional[float] = None
    pixel_count: int
    di_excluded_pixels: int = 0
    errors: Dict[str, str] = Field(default_factory=dict)

    @field_validator("snr", mode="before")
    @classmethod
    def parse_infinite_snr(cls, value):
        if isinstance(value, str) and value.lower() in ("inf", "infinity"):
            return math.inf
        return value

    @field_serializer("snr", when_used="json")
    def serialize_snr(self, value: Optional[float]):
        if value is not None and math.isinf(value):
            return "inf"
        return value


class MetricsReport(BaseModel):
    method: str
    bands: List[BandMetrics]

    @property
    def band_count(self) -> int:
        return len(self.bands)


class RankingEntry(BaseModel):
    index: str
    method: str
    mean: Optional[float] = None
    rank: Optional[int] = None

"""
Report serialization: MetricsReport <-> pandas DataFrame, CSV and JSON
"""

from typing import Dict, List, Sequence

import pandas as pd
import structlog
from pydantic import TypeAdapter, ValidationError

from src.python.errors import ImageFormatError, InvalidArgumentError
from src.python.models.models import BandMetrics, MetricsReport, RankingEntry

logger = structlog.get_logger(__file__)

DEGENERATE_MARKER = "degenerate"

# JSON layout: method -> band -> metrics
_JSON_LAYOUT = TypeAdapter(Dict[str, Dict[int, BandMetrics]])


class ReportProcessor:
    """Converts metrics reports to and from their file representations"""

    # comparison table column order
    COLUMNS = ["Method", "Band", "SD", "En", "SNR", "NRMSE", "DI", "CC"]
    METRIC_FIELDS = {"SD": "sd", "En": "entropy", "SNR": "snr", "NRMSE": "nrmse", "DI": "di", "CC": "cc"}
    RANKING_COLUMNS = ["Index", "Method", "Mean", "Rank"]

    def __init__(self):
        self.logger = logger

    def to_dataframe(self, reports: Sequence[MetricsReport]) -> pd.DataFrame:
        """One row per (method, band), method-major"""
        rows = []
        for report in reports:
            for metrics in report.bands:
                row = {"Method": report.method, "Band": metrics.band}
                for column, field in self.METRIC_FIELDS.items():
                    value = getattr(metrics, field)
                    row[column] = DEGENERATE_MARKER if value is None else value
                rows.append(row)
        df = pd.DataFrame(rows, columns=self.COLUMNS)
        self.logger.debug("Report table built", rows=len(df), methods=len(reports))
        return df

    def to_csv(self, reports: Sequence[MetricsReport]) -> str:
        return self.to_dataframe(reports).to_csv(index=False, lineterminator="\n")

    def to_json(self, reports: Sequence[MetricsReport]) -> str:
        layout = {}
        for report in reports:
            if report.method in layout:
                raise InvalidArgumentError(f"Duplicate method label {report.method!r} in report")
            layout[report.method] = {metrics.band: metrics for metrics in report.bands}
        return _JSON_LAYOUT.dump_json(layout, indent=2).decode("utf-8") + "\n"

    def from_json(self, text: str) -> List[MetricsReport]:
        try:
            layout = _JSON_LAYOUT.validate_json(text)
        except ValidationError as e:
            self.logger.error("Invalid report JSON", error=str(e))
            raise ImageFormatError(f"Invalid report JSON: {e.error_count()} validation error(s)")
        return [
            MetricsReport(method=method, bands=[bands[key] for key in sorted(bands)])
            for method, bands in layout.items()
        ]

    def render(self, reports: Sequence[MetricsReport], report_format: str) -> str:
        if report_format == "csv":
            return self.to_csv(reports)
        if report_format == "json":
            return self.to_json(reports)
        raise InvalidArgumentError(f"Unknown report format {report_format!r}")

    def ranking_to_csv(self, entries: Sequence[RankingEntry]) -> str:
        rows = [
            {
                "Index": e.index,
                "Method": e.method,
                "Mean": DEGENERATE_MARKER if e.mean is None else e.mean,
                "Rank": "" if e.rank is None else e.rank,
            }
            for e in entries
        ]
        return pd.DataFrame(rows, columns=self.RANKING_COLUMNS).to_csv(index=False, lineterminator="\n")


# Factory function for easy instantiation
def get_report_processor() -> ReportProcessor:
    return ReportProcessor()

"""
Report writers for verification suites.

This module is responsible for:
- Writing the JSON suite report (deterministic: fixed key order, no timestamps)
- Streaming count polynomials to CSV for external plotting
- Exporting point sets in the Matrix text format
"""

import csv
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

from .flags import Flag
from .formats import format_flag
from .types import PolynomialRecord, SuiteReport

logger = logging.getLogger(__name__)

# CSV column headers in order
POLYNOMIAL_COLUMNS = [
    "suite",
    "label",
    "degree",
    "coefficients",
    "samples",
]


def render_report(report: SuiteReport) -> str:
    """The JSON text of a report; equal reports render byte-identically."""
    return json.dumps(report.to_dict(), indent=2) + "\n"


def write_report(report: SuiteReport, report_path: Union[str, Path]) -> Path:
    """
    Write the JSON report, creating parent directories.

    Returns:
        The path written
    """
    path = Path(report_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    logger.info(f"Writing report: {path}")
    path.write_text(render_report(report), encoding="utf-8")
    return path


class PolynomialCsvWriter:
    """
    Streaming CSV writer for count polynomials.

    Coefficients are written ascending as space-separated integers and
    samples as "q:count" pairs.
    """

    def __init__(
        self,
        report_path: Union[str, Path],
        suite: str,
        include_header: bool = True
    ):
        self.report_path = Path(report_path)
        self.suite = suite
        self.include_header = include_header

        self._file: Optional[TextIO] = None
        self._writer = None
        self._row_count = 0

    def __enter__(self):
        self.open()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
        return False

    def open(self) -> None:
        if self._file is not None:
            return

        self.report_path.parent.mkdir(parents=True, exist_ok=True)

        logger.info(f"Opening polynomial CSV: {self.report_path}")
        self._file = open(self.report_path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file, quoting=csv.QUOTE_MINIMAL)

        if self.include_header:
            self._writer.writerow(POLYNOMIAL_COLUMNS)

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None
            self._writer = None
            logger.info(f"Polynomial CSV closed: {self._row_count} rows written to {self.report_path}")

    def write_polynomial(self, record: PolynomialRecord) -> None:
        if self._file is None:
            self.open()

        self._writer.writerow([
            self.suite,
            record.label,
            record.degree,
            " ".join(str(c) for c in record.coefficients),
            " ".join(f"{q}:{count}" for q, count in record.samples),
        ])
        self._row_count += 1

        if self._row_count % 100 == 0:
            self._file.flush()

    def write_all(self, records: Iterable[PolynomialRecord]) -> None:
        for record in records:
            self.write_polynomial(record)

    def get_row_count(self) -> int:
        return self._row_count


def export_points(
    directory: Union[str, Path],
    label: str,
    points: List[Flag]
) -> Path:
    """
    Write a point set as one Matrix-format file, blocks separated by blank lines.

    Args:
        directory: Output directory (created if missing)
        label: File stem; characters outside [A-Za-z0-9_-] become '_'
        points: The flags, in the order given

    Returns:
        The file written
    """
    stem = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in label)
    path = Path(directory) / f"{stem}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(format_flag(point) for point in points), encoding="utf-8")
    logger.info(f"Exported {len(points)} points to {path}")
    return path


def summarize(report: SuiteReport) -> Dict[str, int]:
    """Counts shown in the CLI summary block."""
    summary = {"cases": report.cases, "counterexamples": len(report.counterexamples)}
    summary.update(report.counts)
    return summary

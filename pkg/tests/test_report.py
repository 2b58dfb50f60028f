"""
Unit tests for the JSON report and CSV polynomial writer.
"""

import csv
import json
import tempfile
from pathlib import Path

from richkit.exactla import FieldSpec
from richkit.flags import Flag, adapted_flags
from richkit.formats import parse_flag
from richkit.perm_core import Perm
from richkit.report import (
    POLYNOMIAL_COLUMNS,
    PolynomialCsvWriter,
    export_points,
    render_report,
    summarize,
    write_report,
)
from richkit.types import CheckStatus, PolynomialRecord, SuiteReport


def make_report() -> SuiteReport:
    report = SuiteReport(suite="invfix", d=3, q=(2,), spec="invfix d=3 q=2 seed=0")
    report.cases = 6
    report.bump("equivariance_checks", 3)
    report.polynomials.append(PolynomialRecord("X_1,0,2", (1, 1), ((2, 3), (3, 4), (5, 6))))
    return report


class TestSuiteReport:
    """Tests for the report data class."""

    def test_passed_until_failure(self):
        """A report passes until a counterexample is recorded."""
        report = make_report()
        assert report.passed
        assert report.status == CheckStatus.PASSED
        report.fail("invfix.identity", "sigma=0,1,2", ["d=3 p=2\n1 0 0\n0 1 0\n0 0 1\n"])
        assert not report.passed
        assert report.status == CheckStatus.FAILED

    def test_counterexample_keeps_perms(self):
        """Permutations given to fail are serialized in one-line notation."""
        report = make_report()
        report.fail("demazure.associativity", "a b c", perms=[Perm((1, 0, 2)), Perm((0, 2, 1))])
        data = json.loads(render_report(report))
        assert data["counterexamples"] == [
            {"assertion": "demazure.associativity", "detail": "a b c", "flags": [], "perms": ["1,0,2", "0,2,1"]}
        ]

    def test_bump(self):
        """Counters accumulate."""
        report = make_report()
        report.bump("equivariance_checks")
        assert report.counts["equivariance_checks"] == 4


class TestRenderReport:
    """Tests for JSON rendering."""

    def test_key_order(self):
        """Keys come out in a fixed order ending with elapsed_ms."""
        data = json.loads(render_report(make_report()))
        assert list(data) == [
            "suite", "d", "q", "spec", "passed", "cases",
            "counterexamples", "counts", "polynomials", "elapsed_ms",
        ]
        assert data["elapsed_ms"] is None
        assert data["polynomials"][0] == {
            "label": "X_1,0,2",
            "degree": 1,
            "coefficients": [1, 1],
            "samples": [[2, 3], [3, 4], [5, 6]],
        }

    def test_deterministic(self):
        """Equal reports render byte-identically."""
        assert render_report(make_report()) == render_report(make_report())

    def test_write_creates_directories(self):
        """write_report creates parent directories."""
        with tempfile.TemporaryDirectory() as tmp:
            path = write_report(make_report(), Path(tmp) / "out" / "report.json")
            assert path.exists()
            assert json.loads(path.read_text())["suite"] == "invfix"

    def test_summarize(self):
        """The summary block merges cases, failures and counters."""
        assert summarize(make_report()) == {"cases": 6, "counterexamples": 0, "equivariance_checks": 3}


class TestPolynomialCsvWriter:
    """Tests for PolynomialCsvWriter."""

    def test_creates_file_with_header(self):
        """Creates the CSV file with a header row."""
        with tempfile.TemporaryDirectory() as tmp:
            report_path = Path(tmp) / "polys.csv"

            with PolynomialCsvWriter(report_path, "codimension"):
                pass

            with open(report_path) as f:
                assert next(csv.reader(f)) == POLYNOMIAL_COLUMNS

    def test_writes_record(self):
        """Coefficients and samples are space-separated."""
        with tempfile.TemporaryDirectory() as tmp:
            report_path = Path(tmp) / "polys.csv"
            record = PolynomialRecord("R_1,0,2_2,1,0", (1, 1), ((2, 3), (3, 4)))

            with PolynomialCsvWriter(report_path, "codimension") as writer:
                writer.write_polynomial(record)
                assert writer.get_row_count() == 1

            with open(report_path) as f:
                row = next(csv.DictReader(f))
                assert row["suite"] == "codimension"
                assert row["label"] == "R_1,0,2_2,1,0"
                assert row["degree"] == "1"
                assert row["coefficients"] == "1 1"
                assert row["samples"] == "2:3 3:4"

    def test_without_header(self):
        """include_header=False writes rows only."""
        with tempfile.TemporaryDirectory() as tmp:
            report_path = Path(tmp) / "polys.csv"
            with PolynomialCsvWriter(report_path, "s", include_header=False) as writer:
                writer.write_all([PolynomialRecord("a", (1,)), PolynomialRecord("b", (0, 1))])

            with open(report_path) as f:
                rows = list(csv.reader(f))
            assert len(rows) == 2
            assert rows[0][:3] == ["s", "a", "0"]

    def test_opens_lazily(self):
        """Writing without entering the context opens the file."""
        with tempfile.TemporaryDirectory() as tmp:
            report_path = Path(tmp) / "sub" / "polys.csv"
            writer = PolynomialCsvWriter(report_path, "s")
            writer.write_polynomial(PolynomialRecord("a", (1,)))
            writer.close()
            assert report_path.exists()


class TestExportPoints:
    """Tests for point export."""

    def test_export_blocks(self):
        """Each point becomes one Matrix block; the label is sanitized."""
        field = FieldSpec(2)
        points = list(adapted_flags(Perm((1, 0, 2)), field))
        with tempfile.TemporaryDirectory() as tmp:
            path = export_points(tmp, "R 1,0,2/x", points)
            assert path.name == "R_1_0_2_x.txt"
            blocks = path.read_text().split("\n\n")
            assert len(blocks) == 2
            assert parse_flag(blocks[0]) == Flag.coordinate(3, field)
            assert parse_flag(blocks[1]) == points[1]

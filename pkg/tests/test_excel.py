"""
Unit tests for the Excel permutation loader.
"""

import tempfile
from pathlib import Path

import openpyxl
import pytest

from richkit.excel import load_perms
from richkit.perm_core import Perm


def create_test_xlsx(data: list, sheet_name: str = "Sheet1") -> Path:
    """
    Create a temporary XLSX file with data in Column A.

    Args:
        data: List of values to put in Column A (one per row)
        sheet_name: Name for the worksheet

    Returns:
        Path to the temporary XLSX file
    """
    workbook = openpyxl.Workbook()
    worksheet = workbook.active
    worksheet.title = sheet_name

    for row_idx, value in enumerate(data, start=1):
        worksheet.cell(row=row_idx, column=1, value=value)

    temp_file = tempfile.NamedTemporaryFile(suffix=".xlsx", delete=False)
    temp_path = Path(temp_file.name)
    temp_file.close()
    workbook.save(temp_path)
    workbook.close()

    return temp_path


class TestLoadPerms:
    """Tests for reading permutations from Column A."""

    def test_reads_one_line_notation(self):
        """Text cells are parsed as one-line notation."""
        xlsx_path = create_test_xlsx(["2,0,1", "0,1,2,3", "3,1,2,0"])
        try:
            assert load_perms(xlsx_path) == [Perm((2, 0, 1)), Perm((0, 1, 2, 3)), Perm((3, 1, 2, 0))]
        finally:
            xlsx_path.unlink()

    def test_numeric_cell(self):
        """A lone number is a permutation of degree 1."""
        xlsx_path = create_test_xlsx([0, "1,0"])
        try:
            assert load_perms(xlsx_path) == [Perm((0,)), Perm((1, 0))]
        finally:
            xlsx_path.unlink()

    def test_skips_empty_and_invalid(self):
        """Empty cells are skipped silently and invalid ones with a warning."""
        xlsx_path = create_test_xlsx(["2,0,1", None, "   ", "not a perm", "0,0,1", "1,0"])
        try:
            assert load_perms(xlsx_path) == [Perm((2, 0, 1)), Perm((1, 0))]
        finally:
            xlsx_path.unlink()

    def test_deduplicates_in_order(self):
        """Duplicates are dropped, first occurrence wins."""
        xlsx_path = create_test_xlsx(["1,0", "2,0,1", " 1, 0 ", "2,0,1"])
        try:
            assert load_perms(xlsx_path) == [Perm((1, 0)), Perm((2, 0, 1))]
        finally:
            xlsx_path.unlink()

    def test_named_sheet(self):
        """A named sheet can be selected."""
        xlsx_path = create_test_xlsx(["0,1"], sheet_name="Perms")
        try:
            assert load_perms(xlsx_path, sheet_name="Perms") == [Perm((0, 1))]
        finally:
            xlsx_path.unlink()


class TestLoadPermsErrors:
    """Tests for error handling."""

    def test_missing_file(self):
        """Missing files raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_perms("/nonexistent/perms.xlsx")

    def test_directory(self):
        """Directories are rejected."""
        with tempfile.TemporaryDirectory() as tmp:
            with pytest.raises(ValueError) as exc_info:
                load_perms(tmp)
            assert "not a file" in str(exc_info.value)

    def test_unknown_sheet(self):
        """Unknown sheet names list the available sheets."""
        xlsx_path = create_test_xlsx(["0,1"], sheet_name="Perms")
        try:
            with pytest.raises(ValueError) as exc_info:
                load_perms(xlsx_path, sheet_name="Other")
            assert "Sheet 'Other' not found" in str(exc_info.value)
            assert "Perms" in str(exc_info.value)
        finally:
            xlsx_path.unlink()

    def test_no_permutations(self):
        """A column without any permutation is an error."""
        xlsx_path = create_test_xlsx(["header", None, "x"])
        try:
            with pytest.raises(ValueError) as exc_info:
                load_perms(xlsx_path)
            assert "No permutations found" in str(exc_info.value)
        finally:
            xlsx_path.unlink()

    def test_not_an_xlsx(self):
        """Files openpyxl cannot read raise ValueError."""
        with tempfile.NamedTemporaryFile(suffix=".xlsx", delete=False) as handle:
            handle.write(b"plain text")
            path = Path(handle.name)
        try:
            with pytest.raises(ValueError) as exc_info:
                load_perms(path)
            assert "Failed to open" in str(exc_info.value)
        finally:
            path.unlink()

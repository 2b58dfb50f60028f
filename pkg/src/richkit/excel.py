"""
Excel reader for permutation lists.

This module is responsible for:
- Reading XLSX files using openpyxl
- Extracting permutations in one-line notation from Column A
- Skipping empty and unparseable cells with a warning
- Deduplicating while preserving original order
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

import openpyxl

from .formats import ParseError, parse_perm
from .perm_core import Perm

logger = logging.getLogger(__name__)


def load_perms(
    excel_path: Union[str, Path],
    sheet_name: Optional[str] = None
) -> List[Perm]:
    """
    Load permutations from Column A of an Excel file.

    Each cell holds one-line notation such as "3,1,2,0". Numbers are read as
    strings, so a lone integer cell "0" is the permutation of degree 1.

    Args:
        excel_path: Path to the XLSX file
        sheet_name: Optional sheet name (defaults to active sheet)

    Returns:
        List of unique permutations in original order

    Raises:
        FileNotFoundError: If the Excel file doesn't exist
        ValueError: If the file cannot be opened or holds no permutations
    """
    path = Path(excel_path)

    if not path.exists():
        raise FileNotFoundError(f"Excel file not found: {path}")

    if not path.is_file():
        raise ValueError(f"Path is not a file: {path}")

    logger.info(f"Loading permutations from: {path}")

    try:
        workbook = openpyxl.load_workbook(path, read_only=True, data_only=True)
    except Exception as e:
        raise ValueError(f"Failed to open Excel file: {e}") from e

    try:
        if sheet_name:
            if sheet_name not in workbook.sheetnames:
                available = ", ".join(workbook.sheetnames)
                raise ValueError(f"Sheet '{sheet_name}' not found. Available: {available}")
            worksheet = workbook[sheet_name]
        else:
            worksheet = workbook.active
            logger.debug(f"Using active sheet: {worksheet.title}")

        perms: List[Perm] = []
        seen = set()
        row_count = 0
        skipped_count = 0

        for row in worksheet.iter_rows(min_col=1, max_col=1, values_only=True):
            row_count += 1
            value = row[0]
            text = "" if value is None else str(value).strip()
            if not text:
                skipped_count += 1
                continue

            try:
                perm = parse_perm(text)
            except ParseError as e:
                skipped_count += 1
                logger.warning(f"Row {row_count}: '{text}' is not a permutation ({e}), skipping")
                continue

            if perm in seen:
                logger.debug(f"Row {row_count}: Duplicate {perm}, skipping")
                continue
            seen.add(perm)
            perms.append(perm)

    finally:
        workbook.close()

    if not perms:
        raise ValueError(f"No permutations found in Column A of '{path}' ({row_count} rows checked)")

    logger.info(f"Loaded {len(perms)} permutations (skipped {skipped_count} rows)")
    return perms

"""
Text formats for permutations, nests, matrices and flags.

Formats:
    Permutation: comma-separated one-line notation, "4,2,3,1,0"
    Nest: semicolon-separated sets, largest first, "0,1,2,3,4;0,1,3;"
    Matrix: a header line "d=<n> p=<prime>" (n is the number of columns),
        an optional "coranks=0,2,5" line for partial flags, then one row per
        line of space-separated integers. Blank lines and lines starting
        with '#' are ignored.

All parse errors carry the 1-based line and column of the offending token.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .exactla import FieldSpec, Matrix
from .flags import Flag, InvalidFlagError
from .perm_core import InvalidNestError, InvalidPermutationError, NestOfSets, Perm

logger = logging.getLogger(__name__)


class ParseError(ValueError):
    """Raised when text does not match its format; carries line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _parse_ints(text: str, separator: str, line: int, offset: int = 0) -> List[int]:
    values = []
    column = offset + 1
    for token in text.split(separator):
        stripped = token.strip()
        if stripped:
            try:
                values.append(int(stripped))
            except ValueError:
                lead = len(token) - len(token.lstrip())
                raise ParseError(f"Expected an integer, got '{stripped}'", line, column + lead)
        column += len(token) + len(separator)
    return values


def parse_perm(text: str) -> Perm:
    """Parse "4,2,3,1,0"."""
    text = text.strip()
    if not text:
        raise ParseError("Empty permutation")
    try:
        return Perm(tuple(_parse_ints(text, ",", 1)))
    except InvalidPermutationError as e:
        raise ParseError(str(e)) from e


def format_perm(p: Perm) -> str:
    return str(p)


def parse_int_list(text: str) -> Tuple[int, ...]:
    """Parse "2,3,5" (used for coranks and q lists)."""
    values = _parse_ints(text, ",", 1)
    if not values:
        raise ParseError("Empty list")
    return tuple(values)


def parse_nest(text: str) -> NestOfSets:
    """
    Parse "0,1,2,3,4;0,1,3;".

    A trailing ';' stands for the final empty set and may be omitted
    only if the last listed set is already empty.
    """
    text = text.strip()
    if not text:
        raise ParseError("Empty nest")
    sets = []
    column = 1
    for chunk in text.split(";"):
        sets.append(_parse_ints(chunk, ",", 1, column - 1))
        column += len(chunk) + 1
    if sets[-1]:
        sets.append([])
    try:
        return NestOfSets.from_sets(sets)
    except InvalidNestError as e:
        raise ParseError(str(e)) from e


def format_nest(n: NestOfSets) -> str:
    return ";".join(",".join(str(x) for x in sorted(s)) for s in n.sets)


def parse_matrix(text: str) -> Tuple[Matrix, FieldSpec, Optional[Tuple[int, ...]]]:
    """
    Parse a matrix in the Matrix text format.

    Returns:
        (matrix, field, coranks), coranks None if no "coranks=" line

    Raises:
        ParseError: On malformed headers, entries or row lengths
    """
    d: Optional[int] = None
    field: Optional[FieldSpec] = None
    coranks: Optional[Tuple[int, ...]] = None
    rows: List[List[int]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue

        if field is None:
            for token in line.split():
                column = line.index(token) + 1
                key, _, value = token.partition("=")
                try:
                    if key == "d":
                        d = int(value)
                    elif key == "p":
                        field = FieldSpec(int(value))
                    else:
                        raise ParseError(f"Unknown header field '{key}'", number, column)
                except ValueError as e:
                    if isinstance(e, ParseError):
                        raise
                    raise ParseError(f"Bad header value '{token}': {e}", number, column)
            if d is None or field is None:
                raise ParseError("Header must be 'd=<n> p=<prime>'", number, 1)
            continue

        if line.startswith("coranks=") and not rows:
            coranks = tuple(_parse_ints(line[len("coranks="):], ",", number, len("coranks=")))
            continue

        row = _parse_ints(line, " ", number)
        if len(row) != d:
            raise ParseError(f"Row has {len(row)} entries, expected {d}", number, 1)
        rows.append(row)

    if field is None:
        raise ParseError("Missing header 'd=<n> p=<prime>'")
    return Matrix.from_rows(rows, field, cols=d), field, coranks


def format_matrix(
    m: Matrix,
    f: FieldSpec,
    coranks: Optional[Sequence[int]] = None
) -> str:
    lines = [f"d={m.cols} p={f.p}"]
    if coranks is not None:
        lines.append("coranks=" + ",".join(str(c) for c in coranks))
    lines.extend(" ".join(str(x) for x in row) for row in m.to_rows())
    return "\n".join(lines) + "\n"


def parse_flag(text: str) -> Flag:
    """
    Parse a flag: a square Matrix whose rows are the adapted basis v_0, ..., v_{d-1}.

    Raises:
        ParseError: If the text is malformed
        InvalidFlagError: If the basis is not square or not full rank
    """
    m, field, coranks = parse_matrix(text)
    if m.rows != m.cols:
        raise InvalidFlagError(f"A flag needs {m.cols} basis vectors, got {m.rows}")
    if coranks is None:
        coranks = tuple(range(m.cols + 1))
    return Flag(m.cols, field, coranks, tuple(m.to_rows()))


def format_flag(flag: Flag) -> str:
    coranks = None if flag.is_complete else flag.coranks
    return format_matrix(flag.matrix(), flag.field, coranks)


def read_flag(path: Union[str, Path]) -> Flag:
    """Read a flag file; FileNotFoundError if it does not exist."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Flag file not found: {path}")
    logger.debug(f"Reading flag from {path}")
    return parse_flag(path.read_text(encoding="utf-8"))


def write_flag(path: Union[str, Path], flag: Flag) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_flag(flag), encoding="utf-8")
    logger.debug(f"Wrote flag to {path}")


def read_matrix(path: Union[str, Path]) -> Tuple[Matrix, FieldSpec]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Matrix file not found: {path}")
    m, field, _ = parse_matrix(path.read_text(encoding="utf-8"))
    return m, field

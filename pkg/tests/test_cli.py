"""
Unit tests for CLI functions.
"""

import json
import tempfile
from pathlib import Path

import pytest

from richkit.cli import (
    UnknownOperationError,
    assoc_from_files,
    count_condition,
    create_parser,
    main,
    run_op,
)
from richkit.exactla import FieldSpec
from richkit.flags import Flag, reversed_coordinate_flag
from richkit.formats import write_flag
from richkit.schubert_enum import Budget
from richkit.types import ExitCode


class TestPermOps:
    """Tests for the perm command."""

    @pytest.mark.parametrize("op,args,expected", [
        ("demazure", ["0,2,1", "1,0,2"], "2,0,1"),
        ("demazure-rank", ["0,2,1", "1,0,2"], "2,0,1"),
        ("decomp", ["0,1,2,3,4;0,1,3;"], "4,2,3,1,0"),
        ("inv", ["4,3,2,1,0"], "10"),
        ("coinv", ["3,1,4,2,0"], "3"),
        ("omega", ["4"], "3,2,1,0"),
        ("bruhat", ["1,0,2", "2,0,1"], "true"),
        ("smooth", ["2,3,0,1"], "false"),
        ("pattern", ["4,2,3,1,0", "3,1,2,0"], "true"),
        ("compat", ["3,1,4,2,0", "0,2,5"], "true"),
        ("inverse", ["3,1,4,2,0"], "4,1,3,0,2"),
        ("compose", ["2,0,1", "1,0,2"], "0,2,1"),
        ("reduced-word", ["2,0,1"], "1 0"),
        ("nest", ["4,2,3,1,0"], "0,1,2,3,4;0,1,2,3;0,1,3;0,1;0;"),
        ("ess", ["3,1,4,2,0"], "2,2\n2,4"),
        ("rank", ["1,0"], "2 1 0\n1 0 0\n0 0 0"),
    ])
    def test_ops(self, op, args, expected):
        """Each operation prints its canonical text."""
        assert run_op("perm", op, args) == expected

    def test_arity(self):
        """Wrong argument counts are usage errors."""
        with pytest.raises(ValueError) as exc_info:
            run_op("perm", "demazure", ["0,1"])
        assert "takes 2 argument(s)" in str(exc_info.value)

    def test_unknown_op(self):
        """Unregistered operations are rejected."""
        with pytest.raises(UnknownOperationError):
            run_op("perm", "sort", ["0,1"])


class TestFlagOps:
    """Tests for the flag command."""

    def test_assoc_identical_files(self):
        """A flag is in position id to itself."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "p.txt"
            write_flag(path, Flag.coordinate(3, FieldSpec(2)))
            assert str(assoc_from_files(path, path)) == "0,1,2"

    def test_assoc_transverse(self):
        """Standard and reversed coordinate flags are in position omega."""
        with tempfile.TemporaryDirectory() as tmp:
            p_path, q_path = Path(tmp) / "p.txt", Path(tmp) / "q.txt"
            write_flag(p_path, Flag.coordinate(4, FieldSpec(3)))
            write_flag(q_path, reversed_coordinate_flag(4, FieldSpec(3)))
            assert run_op("flag", "assoc", [str(p_path), str(q_path)]) == "3,2,1,0"
            assert run_op("flag", "position", [str(p_path), str(q_path)]) == "3,2,1,0"
            assert run_op("flag", "invfix", [str(p_path), str(q_path)]) == "0"

    def test_adapted_roundtrip(self):
        """Writing an adapted pair and reading it back recovers the permutation."""
        with tempfile.TemporaryDirectory() as tmp:
            p_path, q_path = str(Path(tmp) / "p.txt"), str(Path(tmp) / "q.txt")
            run_op("flag", "adapted", ["4,2,3,1,0", p_path, q_path], q=3)
            assert run_op("flag", "assoc", [p_path, q_path]) == "4,2,3,1,0"
            assert run_op("flag", "m-dim", [p_path, q_path]) == "1"
            assert run_op("flag", "fix-dim", [p_path]) == "15"

    def test_adapted_prints(self):
        """Without output files both flags are printed."""
        text = run_op("flag", "adapted", ["1,0"])
        assert text.count("d=2 p=2") == 2

    def test_mismatched_files(self):
        """Files with different d or p are rejected."""
        with tempfile.TemporaryDirectory() as tmp:
            p_path, q_path = Path(tmp) / "p.txt", Path(tmp) / "q.txt"
            write_flag(p_path, Flag.coordinate(2, FieldSpec(2)))
            write_flag(q_path, Flag.coordinate(2, FieldSpec(3)))
            with pytest.raises(ValueError) as exc_info:
                assoc_from_files(p_path, q_path)
            assert "disagree" in str(exc_info.value)

    def test_missing_file(self):
        """Missing flag files raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            assoc_from_files(Path("/nonexistent/p.txt"), Path("/nonexistent/q.txt"))


class TestLinalgOps:
    """Tests for the linalg command."""

    def test_operations(self):
        """rank, coker, rref and kernel of a small matrix."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "m.txt"
            path.write_text("d=3 p=2\n1 1 0\n0 0 1\n1 1 1\n")
            assert run_op("linalg", "rank", [str(path)]) == "2"
            assert run_op("linalg", "coker", [str(path)]) == "1"
            assert run_op("linalg", "rref", [str(path)]) == "d=3 p=2\n1 1 0\n0 0 1\n0 0 0"
            assert run_op("linalg", "kernel", [str(path)]) == "d=3 p=2\n1 1 0"


class TestCountCondition:
    """Tests for count_condition."""

    def test_permutation(self):
        """X_{1,0,2} counts as 1 + q."""
        record = count_condition("1,0,2", [2, 3, 5], Budget())
        assert record.coefficients == (1, 1)
        assert record.samples == ((2, 3), (3, 4), (5, 6))

    def test_nest(self):
        """Planes in F_q^3 containing e_2: a nest condition on Gr."""
        record = count_condition("0,1,2;0,2", [2, 3, 5, 7], Budget())
        assert record.label == "0,1,2;0,2"
        assert record.coefficients == (1, 1)


class TestMain:
    """Tests for main() and exit codes."""

    def test_perm_output(self, capsys):
        """Results go to stdout."""
        assert main(["perm", "demazure", "0,2,1", "1,0,2"]) == ExitCode.OK
        assert capsys.readouterr().out == "2,0,1\n"

    def test_parse_error(self, capsys):
        """Parse errors exit with 2 and report the position."""
        assert main(["perm", "inv", "0,x"]) == ExitCode.USAGE
        assert "line 1, column 3" in capsys.readouterr().err

    def test_invalid_flag_file(self, capsys):
        """A singular basis is a usage error."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "p.txt"
            path.write_text("d=2 p=2\n1 1\n1 1\n")
            assert main(["flag", "fix-dim", str(path)]) == ExitCode.USAGE
        assert "not full rank" in capsys.readouterr().err

    def test_missing_file(self):
        """Missing files exit with 2."""
        assert main(["linalg", "rank", "/nonexistent/m.txt"]) == ExitCode.USAGE

    def test_unknown_suite(self):
        """argparse rejects unknown suites."""
        with pytest.raises(SystemExit) as exc_info:
            main(["verify", "nope"])
        assert exc_info.value.code == 2

    def test_budget_exceeded(self):
        """Enumerations over budget exit with 3."""
        assert main(["verify", "image-theorem", "--d", "3", "--budget", "5"]) == ExitCode.BUDGET_EXCEEDED

    def test_max_d(self):
        """Complete flags above --max-d exit with 3."""
        assert main(["verify", "invfix", "--d", "4", "--max-d", "3", "--q", "2"]) == ExitCode.OK
        assert main(["verify", "ess-reduction", "--d", "4", "--max-d", "3"]) == ExitCode.BUDGET_EXCEEDED

    def test_verify_prints_json(self, capsys):
        """Without --out the report goes to stdout as JSON."""
        assert main(["verify", "demazure-axioms", "--d", "3"]) == ExitCode.OK
        data = json.loads(capsys.readouterr().out)
        assert data["passed"] is True
        assert data["cases"] == 216
        assert data["elapsed_ms"] is None

    def test_verify_writes_report(self, capsys):
        """With --out a banner and summary are printed and the report is written."""
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "image.json"
            assert main(["verify", "image-theorem", "--d", "3", "--q", "2", "--out", str(out), "--timing"]) == ExitCode.OK
            data = json.loads(out.read_text())
            assert data["cases"] == 36
            assert data["elapsed_ms"] is not None
        printed = capsys.readouterr().out
        assert "Status: PASSED" in printed
        assert "Report saved to" in printed

    def test_count(self, capsys):
        """count prints the polynomial and its degree."""
        assert main(["count", "1,0,2", "--q-list", "2,3,5"]) == ExitCode.OK
        assert capsys.readouterr().out == "q + 1\ndegree 1\n"

    def test_count_too_few_fields(self):
        """Too few sample fields is a usage error."""
        assert main(["count", "2,1,0", "--q-list", "2,3"]) == ExitCode.USAGE


class TestParser:
    """Tests for argument parsing."""

    def test_verify_defaults(self):
        """verify defaults to d=3, q=2, seed 0, one thread."""
        args = create_parser().parse_args(["verify", "invfix"])
        assert (args.d, args.q, args.seed, args.threads) == (3, 2, 0, 1)
        assert args.q_list is None
        assert not args.timing

    def test_q_list(self):
        """--q-list parses comma-separated primes."""
        args = create_parser().parse_args(["verify", "codimension", "--q-list", "2,3,5"])
        assert args.q_list == (2, 3, 5)

"""
Command-line interface for richkit.

This module is responsible for:
- Parsing command-line arguments using argparse
- Configuring logging based on verbosity level
- Running single operations (perm, flag, linalg, count)
- Running verification suites and writing their reports
- Mapping outcomes and errors to exit codes
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .demazure import reduced_word, star, star_via_rank_formula
from .exactla import FieldSpec, cokernel_dim, kernel, rank, rref
from .excel import load_perms
from .flags import Flag, adapted_flags, assoc_perm, fix_space, invfix_check, m_dim, relative_position
from .formats import (
    ParseError,
    format_flag,
    format_matrix,
    format_nest,
    parse_int_list,
    parse_nest,
    parse_perm,
    read_flag,
    read_matrix,
    write_flag,
)
from .perm_core import (
    Perm,
    bruhat_leq,
    coinversions,
    complete_coranks,
    contains_pattern,
    decreasing_completion,
    descending,
    essential_set,
    ess_rows_compatible,
    inversions,
    ls_smooth,
    nest_of_perm,
    rank_table,
)
from .report import PolynomialCsvWriter, render_report, summarize
from .schubert_enum import (
    DEFAULT_Q_LIST,
    BudgetExceededError,
    Budget,
    CountPolynomial,
    LocusSpec,
    enumerate_flags,
    flag_variety_dim,
    locus_points,
    point_count_poly,
)
from .suites import SUITES, SuiteConfig, run_suite
from .types import ExitCode, LocusKind, PolynomialRecord, SuiteReport

logger = logging.getLogger(__name__)


class UnknownOperationError(ValueError):
    """Raised when an operation name is not registered for its command."""
    pass


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _rank_rows(p: Perm) -> str:
    table = rank_table(p)
    return "\n".join(" ".join(str(x) for x in row) for row in table.values)


def _ess_lines(p: Perm) -> str:
    return "\n".join(f"{a},{b}" for a, b in sorted(essential_set(p)))


# op -> (number of arguments, handler taking the raw argument strings)
PERM_OPS: Dict[str, Tuple[int, Callable[..., str]]] = {
    "inv": (1, lambda p: str(inversions(parse_perm(p)))),
    "coinv": (1, lambda p: str(coinversions(parse_perm(p)))),
    "omega": (1, lambda d: str(descending(int(d)))),
    "rank": (1, lambda p: _rank_rows(parse_perm(p))),
    "bruhat": (2, lambda p, q: _bool(bruhat_leq(parse_perm(p), parse_perm(q)))),
    "ess": (1, lambda p: _ess_lines(parse_perm(p))),
    "decomp": (1, lambda n: str(decreasing_completion(parse_nest(n)))),
    "nest": (1, lambda p: format_nest(nest_of_perm(parse_perm(p)))),
    "pattern": (2, lambda p, pattern: _bool(contains_pattern(parse_perm(p), parse_perm(pattern)))),
    "smooth": (1, lambda p: _bool(ls_smooth(parse_perm(p)))),
    "compat": (2, lambda p, c: _bool(ess_rows_compatible(parse_perm(p), parse_int_list(c)))),
    "inverse": (1, lambda p: str(parse_perm(p).inverse())),
    "compose": (2, lambda p, q: str(parse_perm(p).compose(parse_perm(q)))),
    "demazure": (2, lambda t, p: str(star(parse_perm(t), parse_perm(p)))),
    "demazure-rank": (2, lambda t, p: str(star_via_rank_formula(parse_perm(t), parse_perm(p)))),
    "reduced-word": (1, lambda p: " ".join(str(i) for i in reduced_word(parse_perm(p)))),
}

FLAG_OPS = ("assoc", "position", "invfix", "fix-dim", "m-dim", "adapted")
LINALG_OPS = ("rref", "kernel", "coker", "rank")


def assoc_from_files(path_p: Path, path_q: Path) -> Perm:
    """
    Read two flag files and return their associated permutation.

    Raises:
        FileNotFoundError: If a file is missing
        ParseError: If a file is malformed
        InvalidFlagError: If a basis is not full rank or the flags are partial
        ValueError: If the files use different d or p
    """
    p = read_flag(path_p)
    q = read_flag(path_q)
    if p.d != q.d or p.field != q.field:
        raise ValueError(
            f"Flag files disagree: d={p.d} p={p.field.p} vs d={q.d} p={q.field.p}"
        )
    return assoc_perm(p, q)


def _check_arity(command: str, op: str, args: Sequence[str], expected: int) -> None:
    if len(args) != expected:
        raise ValueError(f"'{command} {op}' takes {expected} argument(s), got {len(args)}")


def _flag_op(op: str, args: Sequence[str], q: int) -> str:
    if op in ("assoc", "position", "invfix"):
        _check_arity("flag", op, args, 2)
        if op == "assoc":
            return str(assoc_from_files(Path(args[0]), Path(args[1])))
        p, other = read_flag(args[0]), read_flag(args[1])
        if op == "position":
            return str(relative_position(p, other))
        return str(invfix_check(p, other))
    if op == "fix-dim":
        _check_arity("flag", op, args, 1)
        return str(fix_space(read_flag(args[0])).dim)
    if op == "m-dim":
        if not args:
            raise ValueError("'flag m-dim' needs at least one flag file")
        return str(m_dim([read_flag(path) for path in args]))
    if op == "adapted":
        if len(args) not in (1, 3):
            raise ValueError("'flag adapted' takes a permutation and optionally two output files")
        p, other = adapted_flags(parse_perm(args[0]), FieldSpec(q))
        if len(args) == 3:
            write_flag(args[1], p)
            write_flag(args[2], other)
            return f"{args[1]}\n{args[2]}"
        return format_flag(p) + "\n" + format_flag(other).rstrip("\n")
    raise UnknownOperationError(f"Unknown flag operation '{op}'. Available: {', '.join(FLAG_OPS)}")


def _linalg_op(op: str, args: Sequence[str]) -> str:
    if op not in LINALG_OPS:
        raise UnknownOperationError(f"Unknown linalg operation '{op}'. Available: {', '.join(LINALG_OPS)}")
    _check_arity("linalg", op, args, 1)
    m, f = read_matrix(args[0])
    if op == "rref":
        return format_matrix(rref(m, f), f).rstrip("\n")
    if op == "kernel":
        return format_matrix(kernel(m, f).basis, f).rstrip("\n")
    if op == "coker":
        return str(cokernel_dim(m, f))
    return str(rank(m, f))


def run_op(command: str, op: str, args: Sequence[str], q: int = 2) -> str:
    """
    Run one operation and return its printed result.

    Args:
        command: "perm", "flag" or "linalg"
        op: Operation name within the command
        args: Raw argument strings
        q: Field size for operations that build flags

    Raises:
        UnknownOperationError: If the operation is not registered
        ParseError: If an argument does not parse
    """
    logger.debug(f"run_op {command} {op} {list(args)}")
    if command == "perm":
        if op not in PERM_OPS:
            raise UnknownOperationError(f"Unknown perm operation '{op}'. Available: {', '.join(sorted(PERM_OPS))}")
        arity, handler = PERM_OPS[op]
        _check_arity(command, op, args, arity)
        return handler(*args)
    if command == "flag":
        return _flag_op(op, args, q)
    if command == "linalg":
        return _linalg_op(op, args)
    raise UnknownOperationError(f"Unknown command '{command}'")


def count_condition(
    condition: str,
    q_list: Sequence[int],
    budget: Budget,
    threads: int = 1
) -> PolynomialRecord:
    """
    Count the points of X_sigma(E) over each F_q and interpolate.

    The condition is a permutation, or a nest for a partial flag variety.
    The degree bound is the expected dimension dim Fl(coranks) - coinv(sigma).
    """
    if ";" in condition:
        nest = parse_nest(condition)
        sigma, coranks = decreasing_completion(nest), nest.coranks
    else:
        sigma = parse_perm(condition)
        coranks = complete_coranks(sigma.d)
    d = sigma.d
    bound = flag_variety_dim(d, coranks) - coinversions(sigma)

    def count_at(f: FieldSpec) -> int:
        variety = enumerate_flags(d, f, coranks, budget=budget)
        spec = LocusSpec(LocusKind.SCHUBERT, (sigma,), (Flag.coordinate(d, f),), coranks)
        return len(locus_points(spec, variety, threads=threads))

    poly = point_count_poly(count_at, q_list, bound)
    return PolynomialRecord(condition, poly.coefficients, poly.samples)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-v", "--verbose",
        action="count",
        default=0,
        help="Increase output verbosity (-v for INFO, -vv for DEBUG)"
    )


def _add_budget(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--budget",
        type=int,
        default=None,
        metavar="N",
        help="Largest q^dim enumerated (default: $RICHKIT_BUDGET or 5000000)"
    )
    parser.add_argument(
        "--max-d",
        type=int,
        default=None,
        dest="max_d",
        metavar="N",
        help="Largest degree for complete flag varieties (default: 4)"
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="N",
        help="Worker threads for point sweeps (results do not depend on it)"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser."""
    parser = argparse.ArgumentParser(
        prog="richkit",
        description="""
Exact Schubert and Richardson combinatorics with brute-force checks over F_q.

Permutations are 0-indexed one-line words ("4,2,3,1,0"); nests are
semicolon-separated sets, largest first ("0,1,2,3,4;0,1,3;"). Flag and
matrix files start with a "d=<n> p=<prime>" header.
        """.strip(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Demazure product
  %(prog)s perm demazure 0,2,1 1,0,2

  # Decreasing completion of a nest
  %(prog)s perm decomp "0,1,2,3,4;0,1,3;"

  # Relative position of two flags stored in files
  %(prog)s flag assoc p.txt q.txt

  # Write a pair of flags in relative position 4,2,3,1,0 over F_3
  %(prog)s flag adapted 4,2,3,1,0 p.txt q.txt --q 3

  # Count polynomial of a Schubert variety
  %(prog)s count 2,3,0,1 --q-list 2,3,5,7,11,13

  # Run a suite and write the JSON report
  %(prog)s verify image-theorem --d 3 --q 2 --out image.json

  # Restrict a sweep to permutations listed in a workbook
  %(prog)s verify smooth-locus --d 4 --perms-from perms.xlsx --sheet Sheet1

Exit codes:
  0 all assertions passed, 1 an assertion failed, 2 usage or parse error,
  3 enumeration budget exceeded, 130 interrupted
        """
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    perm = commands.add_parser("perm", help="Permutation operations")
    perm.add_argument("op", choices=sorted(PERM_OPS), metavar="OP", help=", ".join(sorted(PERM_OPS)))
    perm.add_argument("args", nargs="*", help="Permutations, nests or integers")
    _add_common(perm)

    flag = commands.add_parser("flag", help="Operations on flag files")
    flag.add_argument("op", choices=FLAG_OPS, metavar="OP", help=", ".join(FLAG_OPS))
    flag.add_argument("args", nargs="*", help="Flag files (or a permutation for 'adapted')")
    flag.add_argument("--q", type=int, default=2, help="Field size for 'adapted' (default: 2)")
    _add_common(flag)

    linalg = commands.add_parser("linalg", help="Linear algebra on matrix files")
    linalg.add_argument("op", choices=LINALG_OPS, metavar="OP", help=", ".join(LINALG_OPS))
    linalg.add_argument("args", nargs="*", help="Matrix file")
    _add_common(linalg)

    count = commands.add_parser("count", help="Interpolated point count of a Schubert variety")
    count.add_argument("condition", help="Permutation or nest")
    count.add_argument(
        "--q-list",
        type=parse_int_list,
        default=DEFAULT_Q_LIST,
        dest="q_list",
        metavar="Q,Q,...",
        help="Field sizes to sample (default: 2,3,5,7,11,13)"
    )
    count.add_argument("--csv", type=Path, default=None, dest="csv_out", metavar="CSV_FILE",
                       help="Also write the polynomial as a CSV row")
    _add_budget(count)
    _add_common(count)

    verify = commands.add_parser("verify", help="Run a named verification suite")
    verify.add_argument("suite", choices=sorted(SUITES), metavar="SUITE", help=", ".join(sorted(SUITES)))
    verify.add_argument("--d", type=int, default=3, help="Degree (default: 3)")
    verify.add_argument("--q", type=int, default=2, help="Field size (default: 2)")
    verify.add_argument(
        "--q-list",
        type=parse_int_list,
        default=None,
        dest="q_list",
        metavar="Q,Q,...",
        help="Several field sizes (overrides --q)"
    )
    verify.add_argument("--seed", type=int, default=0, help="Seed for sampled cases (default: 0)")
    verify.add_argument("--samples", type=int, default=None, metavar="N",
                        help="Number of sampled cases (suite default if omitted)")
    verify.add_argument("--out", type=Path, default=None, metavar="JSON_FILE",
                        help="Write the JSON report here (default: print it)")
    verify.add_argument("--csv", type=Path, default=None, dest="csv_out", metavar="CSV_FILE",
                        help="Also stream count polynomials to CSV")
    verify.add_argument("--timing", action="store_true", help="Record elapsed_ms in the report")
    verify.add_argument("--perms-from", type=Path, default=None, dest="perms_from", metavar="XLSX",
                        help="Restrict permutation sweeps to Column A of a workbook")
    verify.add_argument("-s", "--sheet", type=str, default=None, metavar="NAME",
                        help="Excel sheet name to read (default: active sheet)")
    verify.add_argument("--export-points", type=Path, default=None, dest="export_dir", metavar="DIR",
                        help="Export point sets in the Matrix text format")
    _add_budget(verify)
    _add_common(verify)

    return parser


def setup_logging(verbosity: int) -> None:
    """Configure logging based on verbosity level."""
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity >= 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    )


def build_config(args: argparse.Namespace) -> SuiteConfig:
    """Turn parsed 'verify' arguments into a SuiteConfig."""
    perms = None
    if args.perms_from:
        perms = tuple(load_perms(args.perms_from, args.sheet))
    return SuiteConfig(
        suite=args.suite,
        d=args.d,
        q_list=args.q_list or (args.q,),
        budget=Budget.from_env(args.budget, args.max_d),
        seed=args.seed,
        threads=args.threads,
        samples=args.samples,
        perms=perms,
        out=args.out,
        csv_out=args.csv_out,
        export_dir=args.export_dir,
        record_timing=args.timing,
    )


def print_banner(config: SuiteConfig) -> None:
    """Print startup banner with configuration."""
    print(f"\n{'='*60}")
    print(f"richkit v{__version__}")
    print(f"{'='*60}")
    print(f"Suite:        {config.suite}")
    print(f"Degree:       {config.d}")
    print(f"Fields:       {', '.join(f'F_{q}' for q in config.q_list)}")
    print(f"Seed:         {config.seed}")
    print(f"Budget:       {config.budget.limit} (max d {config.budget.max_d})")
    if config.perms is not None:
        print(f"Permutations: {len(config.perms)} from list")
    if config.threads > 1:
        print(f"Threads:      {config.threads}")
    print(f"Report:       {config.out}")
    if config.csv_out:
        print(f"CSV:          {config.csv_out}")
    print(f"{'='*60}\n")


def print_summary(report: SuiteReport) -> None:
    """Print final summary of a suite run."""
    print(f"\n{'='*60}")
    print("SUMMARY")
    print(f"{'='*60}")
    for name, value in summarize(report).items():
        print(f"  {name + ':':<28} {value}")
    if report.polynomials:
        print(f"  {'polynomials:':<28} {len(report.polynomials)}")
    if report.elapsed_ms is not None:
        print(f"  {'elapsed_ms:':<28} {report.elapsed_ms}")
    print(f"\nStatus: {report.status.value}")
    for counterexample in report.counterexamples[:5]:
        print(f"  [{counterexample.assertion}] {counterexample.detail}")
    if len(report.counterexamples) > 5:
        print(f"  ... {len(report.counterexamples) - 5} more in the report")
    print(f"{'='*60}\n")


def _run_count(args: argparse.Namespace) -> int:
    budget = Budget.from_env(args.budget, args.max_d)
    record = count_condition(args.condition, args.q_list, budget, args.threads)
    print(CountPolynomial(record.coefficients))
    print(f"degree {record.degree}")
    if args.csv_out:
        with PolynomialCsvWriter(args.csv_out, "count") as writer:
            writer.write_polynomial(record)
    return ExitCode.OK


def _run_verify(args: argparse.Namespace) -> int:
    config = build_config(args)
    if config.out is not None:
        print_banner(config)

    report = run_suite(config)

    if config.out is None:
        sys.stdout.write(render_report(report))
    else:
        print_summary(report)
        print(f"Report saved to: {config.out}")
    return ExitCode.OK if report.passed else ExitCode.ASSERTION_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI.

    Args:
        argv: Command-line arguments (defaults to sys.argv[1:])

    Returns:
        Exit code (see ExitCode)
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    setup_logging(args.verbose)
    logger.debug(f"Arguments: {args}")

    try:
        if args.command == "verify":
            return int(_run_verify(args))
        if args.command == "count":
            return int(_run_count(args))
        q = getattr(args, "q", 2)
        print(run_op(args.command, args.op, args.args, q))
        return int(ExitCode.OK)

    except BudgetExceededError as e:
        print(f"\nError: {e}", file=sys.stderr)
        logger.error(f"Budget exceeded: {e}")
        return int(ExitCode.BUDGET_EXCEEDED)

    except ParseError as e:
        print(f"\nError: {e}", file=sys.stderr)
        logger.error(f"Parse error: {e}")
        return int(ExitCode.USAGE)

    except FileNotFoundError as e:
        print(f"\nError: {e}", file=sys.stderr)
        logger.error(f"File not found: {e}")
        return int(ExitCode.USAGE)

    except ValueError as e:
        print(f"\nError: {e}", file=sys.stderr)
        logger.error(f"Value error: {e}")
        return int(ExitCode.USAGE)

    except KeyboardInterrupt:
        print("\n\nOperation cancelled by user.", file=sys.stderr)
        return 130

    except Exception as e:
        print(f"\nUnexpected error: {e}", file=sys.stderr)
        logger.exception("Unexpected error")
        return int(ExitCode.ASSERTION_FAILED)


if __name__ == "__main__":
    sys.exit(main())

"""
Type definitions and data classes shared by the suites, reports and CLI.

This module defines:
- LocusKind: Enum for the kinds of degeneracy loci
- CheckStatus: Enum for the outcome of a suite
- ExitCode: Process exit codes of the CLI
- Counterexample: A replayable failed assertion
- PolynomialRecord: A point-count polynomial found by interpolation
- SuiteReport: Everything a suite run produces, ready for JSON
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, List, Optional, Sequence, Tuple


class LocusKind(Enum):
    """Kind of degeneracy locus."""
    SCHUBERT = "schubert"       # One permutation or nest against one flag
    RICHARDSON = "richardson"   # Two Schubert conditions
    MULTI = "multi"             # l Schubert conditions against l flags


class CheckStatus(Enum):
    """Outcome of a verification suite (human-readable)."""
    PASSED = "PASSED"   # Every assertion held
    FAILED = "FAILED"   # At least one counterexample recorded


class ExitCode(IntEnum):
    """Process exit codes."""
    OK = 0
    ASSERTION_FAILED = 1
    USAGE = 2
    BUDGET_EXCEEDED = 3


@dataclass(slots=True)
class Counterexample:
    """
    A failed assertion, with enough data to replay it.

    Attributes:
        assertion: Stable identifier of the assertion (e.g. "image.nonempty")
        detail: Human-readable description including the permutations
        flags: Involved flags in the Matrix text format
        perms: Involved permutations in one-line notation
    """
    assertion: str
    detail: str
    flags: List[str] = field(default_factory=list)
    perms: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "assertion": self.assertion,
            "detail": self.detail,
            "flags": list(self.flags),
            "perms": list(self.perms),
        }


@dataclass(slots=True)
class PolynomialRecord:
    """A count polynomial: coefficients ascending (constant term first)."""
    label: str
    coefficients: Tuple[int, ...]
    samples: Tuple[Tuple[int, int], ...] = ()

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "coefficients": list(self.coefficients),
            "samples": [list(s) for s in self.samples],
        }


@dataclass
class SuiteReport:
    """Result of one suite run."""
    suite: str
    d: int
    q: Tuple[int, ...]
    spec: str
    cases: int = 0
    counts: Dict[str, int] = field(default_factory=dict)
    counterexamples: List[Counterexample] = field(default_factory=list)
    polynomials: List[PolynomialRecord] = field(default_factory=list)
    elapsed_ms: Optional[int] = None

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def status(self) -> CheckStatus:
        return CheckStatus.PASSED if self.passed else CheckStatus.FAILED

    def bump(self, name: str, amount: int = 1) -> None:
        self.counts[name] = self.counts.get(name, 0) + amount

    def fail(
        self,
        assertion: str,
        detail: str,
        flags: Optional[List[str]] = None,
        perms: Sequence[object] = ()
    ) -> None:
        self.counterexamples.append(
            Counterexample(assertion, detail, list(flags or []), [str(p) for p in perms])
        )

    def to_dict(self) -> Dict:
        return {
            "suite": self.suite,
            "d": self.d,
            "q": list(self.q),
            "spec": self.spec,
            "passed": self.passed,
            "cases": self.cases,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
            "counts": dict(self.counts),
            "polynomials": [p.to_dict() for p in self.polynomials],
            "elapsed_ms": self.elapsed_ms,
        }

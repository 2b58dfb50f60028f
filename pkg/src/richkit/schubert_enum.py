"""
Brute-force geometry over F_q.

This module is responsible for:
- Enumerating complete and partial flag varieties cell by cell
- Materializing Schubert, Richardson and multi-flag degeneracy loci as point sets
- Tangent space dimensions from first-order expansion of the rank conditions
- Exact interpolation of point-count polynomials
- The image, smooth-locus and product sweeps

Enumeration:
    Fl(coranks; F_q) is the disjoint union of cells C_pi over permutations pi
    that increase on every corank block. A point of C_pi has the canonical
    adapted basis v_a = e_{pi(a)} + sum of x_c e_c, where c runs over columns
    after pi(a) that are not pivots of later rows. This gives q^inv(pi) points
    per cell. Points are produced in lexicographic order of pi, then of the
    free entries, which fixes the order of every report.
"""

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, prod
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple, TypeVar, Union

import numpy as np
import sympy

from .exactla import FieldSpec, Matrix, det_rows, inverse_array, kernel, rank_array
from .flags import (
    Flag,
    adapted_flags,
    coordinate_flag,
    intersection_dim,
    m_dim,
    relative_position,
)
from .perm_core import (
    NestOfSets,
    Perm,
    all_perms,
    bruhat_leq,
    coinversions,
    complete_coranks,
    decreasing_completion,
    descending,
    essential_set,
    ess_rows_compatible,
    inversions,
    rank_table,
    validate_coranks,
)
from .demazure import star
from .types import LocusKind

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# Default cap on q^dim(Fl) for any single enumeration (admits d = 4, q <= 13)
DEFAULT_BUDGET = 5_000_000
# Largest complete-flag degree enumerated without an explicit override
DEFAULT_MAX_D = 4
BUDGET_ENV_VAR = "RICHKIT_BUDGET"

# Sample fields used for count interpolation
DEFAULT_Q_LIST = (2, 3, 5, 7, 11, 13)


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured budget."""
    pass


class IncompatibleLocusError(ValueError):
    """Raised when a locus description does not fit its points or flags."""
    pass


class PointNotInLocusError(ValueError):
    """Raised when a tangent space is requested at a point outside the locus."""
    pass


class CountsNotPolynomialError(ValueError):
    """Raised when sampled counts do not fit an integer polynomial of bounded degree."""
    pass


# ---------------------------------------------------------------------------
# Budget and counting formulas
# ---------------------------------------------------------------------------

def flag_variety_dim(d: int, coranks: Optional[Sequence[int]] = None) -> int:
    """dim Fl(coranks): C(d, 2) minus C(block, 2) for every block."""
    coranks = tuple(coranks) if coranks is not None else complete_coranks(d)
    return comb(d, 2) - sum(comb(b - a, 2) for a, b in zip(coranks, coranks[1:]))


def _q_factorial(n: int, q: int) -> int:
    return prod(sum(q ** k for k in range(i)) for i in range(1, n + 1))


def flag_count(d: int, q: int, coranks: Optional[Sequence[int]] = None) -> int:
    """|Fl(coranks)(F_q)|, the Gaussian multinomial coefficient."""
    coranks = tuple(coranks) if coranks is not None else complete_coranks(d)
    blocks = [b - a for a, b in zip(coranks, coranks[1:])]
    return _q_factorial(d, q) // prod(_q_factorial(k, q) for k in blocks)


@dataclass(frozen=True)
class Budget:
    """
    Enumeration caps.

    Attributes:
        limit: Largest allowed q^(dimension of the enumerated variety)
        max_d: Largest degree allowed for complete flag varieties
    """
    limit: int = DEFAULT_BUDGET
    max_d: int = DEFAULT_MAX_D

    @classmethod
    def from_env(cls, limit: Optional[int] = None, max_d: Optional[int] = None) -> "Budget":
        """
        Build a budget, letting RICHKIT_BUDGET override the default limit.

        Explicit arguments win over the environment.

        Raises:
            ValueError: If RICHKIT_BUDGET is not a positive integer
        """
        if limit is None:
            raw = os.environ.get(BUDGET_ENV_VAR)
            if raw:
                try:
                    limit = int(raw)
                except ValueError:
                    raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got '{raw}'")
                if limit <= 0:
                    raise ValueError(f"{BUDGET_ENV_VAR} must be positive, got {limit}")
                logger.info(f"Budget limit from {BUDGET_ENV_VAR}: {limit}")
            else:
                limit = DEFAULT_BUDGET
        return cls(limit=limit, max_d=max_d if max_d is not None else DEFAULT_MAX_D)

    def check(
        self,
        d: int,
        q: int,
        coranks: Optional[Sequence[int]] = None,
        copies: int = 1
    ) -> None:
        """
        Raise BudgetExceededError unless the enumeration fits.

        Args:
            d: Ambient dimension
            q: Field size
            coranks: Coranks of the enumerated flags (complete if None)
            copies: Number of factors when enumerating a product of varieties
        """
        complete = coranks is None or tuple(coranks) == complete_coranks(d)
        if complete and d > self.max_d:
            raise BudgetExceededError(
                f"Complete flags with d={d} exceed max_d={self.max_d} (use --max-d to raise it)"
            )
        size = q ** (flag_variety_dim(d, coranks) * copies)
        if size > self.limit:
            raise BudgetExceededError(
                f"Enumeration size q^dim = {size} exceeds budget {self.limit} "
                f"(d={d}, q={q}, coranks={tuple(coranks) if coranks else 'complete'}, copies={copies})"
            )


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """Map fn over items, optionally on a thread pool; results keep input order."""
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))


# ---------------------------------------------------------------------------
# Flag varieties
# ---------------------------------------------------------------------------

def _cell_representative(pi: Perm, coranks: Sequence[int]) -> bool:
    """pi increases on every corank block (one pi per cell of Fl(coranks))."""
    for start, stop in zip(coranks, coranks[1:]):
        block = pi.word[start:stop]
        if any(x > y for x, y in zip(block, block[1:])):
            return False
    return True


def cell_free_positions(pi: Perm) -> List[List[int]]:
    """For each row a, the columns holding a free entry in the canonical basis of C_pi."""
    d = pi.d
    positions = []
    for a in range(d):
        later_pivots = set(pi.word[a + 1:])
        positions.append([c for c in range(pi(a) + 1, d) if c not in later_pivots])
    return positions


def cell_flags(
    pi: Perm,
    f: FieldSpec,
    coranks: Optional[Sequence[int]] = None
) -> Iterator[Flag]:
    """All flags of the cell C_pi relative to the standard flag, in lexicographic order."""
    d = pi.d
    coranks = tuple(coranks) if coranks is not None else complete_coranks(d)
    free = cell_free_positions(pi)
    slots = [(a, c) for a in range(d) for c in free[a]]
    for values in itertools.product(range(f.p), repeat=len(slots)):
        rows = [[0] * d for _ in range(d)]
        for a in range(d):
            rows[a][pi(a)] = 1
        for (a, c), x in zip(slots, values):
            rows[a][c] = x
        yield Flag(d, f, coranks, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class FlagVariety:
    """
    All F_q points of Fl(coranks) in canonical order.

    Attributes:
        d: Ambient dimension
        field: Base field
        coranks: Coranks of every point
        points: The flags
    """
    d: int
    field: FieldSpec
    coranks: Tuple[int, ...]
    points: Tuple[Flag, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Flag]:
        return iter(self.points)

    @property
    def is_complete(self) -> bool:
        return self.coranks == complete_coranks(self.d)


def enumerate_flags(
    d: int,
    field: FieldSpec,
    coranks: Optional[Sequence[int]] = None,
    budget: Optional[Budget] = None
) -> FlagVariety:
    """
    Enumerate Fl(coranks)(F_q).

    Args:
        d: Ambient dimension
        field: Base field F_q
        coranks: Coranks of the flags (complete if None)
        budget: Caps to enforce (defaults from the environment)

    Returns:
        FlagVariety with all points in canonical order

    Raises:
        BudgetExceededError: If the variety is too large
    """
    coranks = tuple(coranks) if coranks is not None else complete_coranks(d)
    validate_coranks(d, coranks)
    (budget or Budget.from_env()).check(d, field.p, coranks)

    points: List[Flag] = []
    for pi in all_perms(d):
        if _cell_representative(pi, coranks):
            points.extend(cell_flags(pi, field, coranks))

    expected = flag_count(d, field.p, coranks)
    if len(points) != expected:
        raise RuntimeError(f"Enumerated {len(points)} flags, expected {expected}")
    logger.info(f"Enumerated {len(points)} flags (d={d}, q={field.p}, coranks={coranks})")
    return FlagVariety(d, field, coranks, tuple(points))


def schubert_cell_union(sigma: Perm, field: FieldSpec) -> List[Flag]:
    """
    Points of X_sigma(E) for the standard flag E, as the union of cells C_pi, pi <= sigma.

    Avoids enumerating the whole flag variety; |result| = sum of q^inv(pi).
    """
    points: List[Flag] = []
    for pi in all_perms(sigma.d):
        if bruhat_leq(pi, sigma):
            points.extend(cell_flags(pi, field))
    return points


# ---------------------------------------------------------------------------
# Loci
# ---------------------------------------------------------------------------

Condition = Union[Perm, NestOfSets]


def _as_perm(condition: Condition) -> Tuple[Perm, Optional[Tuple[int, ...]]]:
    if isinstance(condition, NestOfSets):
        return decreasing_completion(condition), condition.coranks
    return condition, None


@dataclass(frozen=True)
class LocusSpec:
    """
    A degeneracy locus in Fl(coranks): points V with relative position to
    each reference flag F_i at most perms[i] (exactly perms[i] if exact).

    Attributes:
        kind: Schubert, Richardson or multi-flag
        perms: One permutation per reference flag
        flags: The complete reference flags
        coranks: Coranks of the points
        exact: Use the exact-position (open) locus
        nests: The nests the permutations came from, if any
    """
    kind: LocusKind
    perms: Tuple[Perm, ...]
    flags: Tuple[Flag, ...]
    coranks: Tuple[int, ...]
    exact: bool = False
    nests: Tuple[NestOfSets, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(self.perms))
        object.__setattr__(self, "flags", tuple(self.flags))
        object.__setattr__(self, "coranks", tuple(self.coranks))
        object.__setattr__(self, "nests", tuple(self.nests))

        if not self.perms or len(self.perms) != len(self.flags):
            raise IncompatibleLocusError(
                f"Need one permutation per reference flag, got {len(self.perms)} and {len(self.flags)}"
            )
        d = self.flags[0].d
        for sigma, ref in zip(self.perms, self.flags):
            if sigma.d != d or ref.d != d or ref.field != self.flags[0].field:
                raise IncompatibleLocusError("Permutations and reference flags must share d and field")
            if not ref.is_complete:
                raise IncompatibleLocusError("Reference flags must be complete")
            if not ess_rows_compatible(sigma, self.coranks):
                raise IncompatibleLocusError(
                    f"Permutation {sigma} does not decrease on the blocks of coranks {self.coranks}"
                )
        if self.exact and self.coranks != complete_coranks(d):
            raise IncompatibleLocusError("Exact-position loci are defined for complete flags only")

    @property
    def d(self) -> int:
        return self.flags[0].d

    @property
    def field(self) -> FieldSpec:
        return self.flags[0].field

    @classmethod
    def schubert(cls, sigma: Condition, flag: Flag, exact: bool = False) -> "LocusSpec":
        perm, coranks = _as_perm(sigma)
        nests = (sigma,) if isinstance(sigma, NestOfSets) else ()
        return cls(LocusKind.SCHUBERT, (perm,), (flag,), coranks or complete_coranks(perm.d), exact, nests)

    @classmethod
    def richardson(
        cls,
        sigma: Condition,
        tau: Condition,
        p: Flag,
        q_flag: Flag,
        exact: bool = False
    ) -> "LocusSpec":
        perm_s, coranks_s = _as_perm(sigma)
        perm_t, coranks_t = _as_perm(tau)
        if coranks_s and coranks_t and coranks_s != coranks_t:
            raise IncompatibleLocusError(f"Nests have different coranks: {coranks_s} vs {coranks_t}")
        coranks = coranks_s or coranks_t or complete_coranks(perm_s.d)
        nests = tuple(n for n in (sigma, tau) if isinstance(n, NestOfSets))
        return cls(LocusKind.RICHARDSON, (perm_s, perm_t), (p, q_flag), coranks, exact, nests)

    @classmethod
    def multi(cls, sigmas: Sequence[Perm], flags: Sequence[Flag], exact: bool = False) -> "LocusSpec":
        d = flags[0].d if flags else 0
        return cls(LocusKind.MULTI, tuple(sigmas), tuple(flags), complete_coranks(d), exact)

    def label(self) -> str:
        perms = " ".join(str(p) for p in self.perms)
        prefix = "open " if self.exact else ""
        return f"{prefix}{self.kind.value}({perms})"

    def expected_dim(self) -> int:
        """dim Fl(coranks) minus the sum of coinversions."""
        return flag_variety_dim(self.d, self.coranks) - sum(coinversions(p) for p in self.perms)


ConditionSet = str  # "essential", "full" or "position"


def _rank_pairs(sigma: Perm, coranks: Sequence[int], conditions: ConditionSet) -> List[Tuple[int, int]]:
    if conditions == "essential":
        return sorted(essential_set(sigma))
    d = sigma.d
    return [(a, b) for a in coranks if a < d for b in range(d)]


def satisfies(point: Flag, spec: LocusSpec, conditions: ConditionSet = "essential") -> bool:
    """
    True iff point lies in the locus.

    Args:
        point: A flag with the locus coranks
        spec: The locus
        conditions: "essential" checks dim V^a meet F^b >= r(a, b) on Ess only,
            "full" on every allowed (a, b), "position" compares relative
            positions in Bruhat order (complete flags only)

    Raises:
        IncompatibleLocusError: If point does not match the locus shape
    """
    if point.d != spec.d or point.field != spec.field or point.coranks != spec.coranks:
        raise IncompatibleLocusError(
            f"Point with coranks {point.coranks} does not fit locus with coranks {spec.coranks}"
        )
    if conditions not in ("essential", "full", "position"):
        raise ValueError(f"Unknown condition set: {conditions}")

    for sigma, ref in zip(spec.perms, spec.flags):
        if conditions == "position" or spec.exact:
            if not point.is_complete:
                raise IncompatibleLocusError("Position comparison needs complete flags")
            position = relative_position(point, ref)
            ok = position == sigma if spec.exact else bruhat_leq(position, sigma)
            if not ok:
                return False
            continue
        table = rank_table(sigma)
        for a, b in _rank_pairs(sigma, spec.coranks, conditions):
            required = table(a, b)
            if required and intersection_dim(point, a, ref, b) < required:
                return False
    return True


def _check_variety(spec: LocusSpec, fv: FlagVariety) -> None:
    if fv.d != spec.d or fv.field != spec.field or fv.coranks != spec.coranks:
        raise IncompatibleLocusError(
            f"Locus (d={spec.d}, q={spec.field.p}, coranks={spec.coranks}) does not live in "
            f"Fl(d={fv.d}, q={fv.field.p}, coranks={fv.coranks})"
        )


def locus_points(
    spec: LocusSpec,
    fv: FlagVariety,
    conditions: ConditionSet = "essential",
    threads: int = 1
) -> List[Flag]:
    """All points of fv in the locus, in fv order."""
    _check_variety(spec, fv)
    keep = parallel_map(lambda point: satisfies(point, spec, conditions), fv.points, threads)
    points = [point for point, ok in zip(fv.points, keep) if ok]
    logger.debug(f"{spec.label()}: {len(points)} of {len(fv)} points ({conditions} conditions)")
    return points


def richardson_points(
    sigma: Condition,
    tau: Condition,
    p: Flag,
    q_flag: Flag,
    fv: FlagVariety,
    conditions: ConditionSet = "essential",
    threads: int = 1
) -> List[Flag]:
    """Points of X_sigma(P) intersected with X_tau(Q)."""
    return locus_points(LocusSpec.richardson(sigma, tau, p, q_flag), fv, conditions, threads)


class PositionIndex:
    """
    Relative positions of every point of a complete flag variety to a set
    of reference flags, computed once and shared by a sweep.
    """

    def __init__(self, fv: FlagVariety, references: Sequence[Flag], threads: int = 1):
        if not fv.is_complete:
            raise IncompatibleLocusError("PositionIndex needs a complete flag variety")
        self.fv = fv
        self.references = tuple(references)
        inverses = [inverse_array(ref.array(), fv.field.p) for ref in self.references]

        def positions_of(point: Flag) -> Tuple[Perm, ...]:
            return tuple(relative_position(point, ref, inv) for ref, inv in zip(self.references, inverses))

        self.positions: List[Tuple[Perm, ...]] = parallel_map(positions_of, fv.points, threads)

    def count(self, bounds: Sequence[Perm], exact: bool = False) -> int:
        """Number of points whose position to reference i is <= bounds[i] (== if exact)."""
        return len(self.matching(bounds, exact))

    def matching(self, bounds: Sequence[Perm], exact: bool = False) -> List[int]:
        """Indices of points whose position to reference i is <= bounds[i] (== if exact)."""
        result = []
        for index, positions in enumerate(self.positions):
            if exact:
                ok = all(pos == bound for pos, bound in zip(positions, bounds))
            else:
                ok = all(bruhat_leq(pos, bound) for pos, bound in zip(positions, bounds))
            if ok:
                result.append(index)
        return result


# ---------------------------------------------------------------------------
# Tangent spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentReport:
    """
    Tangent data of a locus at a point.

    Attributes:
        point: The flag
        locus: The locus it lies on
        locus_dim: Dimension of the locus
        tangent_dim: Dimension of the Zariski tangent space at point
        smooth: tangent_dim == locus_dim
    """
    point: Flag
    locus: LocusSpec
    locus_dim: int
    tangent_dim: int
    smooth: bool


TangentMethod = str  # "kernel" or "minors"


def _kernel_equations(
    stacked: np.ndarray,
    basis_v: np.ndarray,
    allowed_rank: int,
    p: int
) -> List[np.ndarray]:
    """
    First-order conditions of rank(stacked) <= allowed_rank at a point of exact rank.

    At such a point the derivatives of all (allowed_rank + 1)-minors span
    the functionals M1 -> u M1 w with u in the left kernel and w in the
    right kernel. Only the V rows move: M1 = [basis_v Y ; 0].
    """
    f = FieldSpec(p)
    n_v = basis_v.shape[0]
    left = kernel(Matrix.from_array(stacked.T, f), f).array()
    right = kernel(Matrix.from_array(stacked, f), f).array()
    equations = []
    for u in left:
        moved = (u[:n_v] @ basis_v) % p
        for w in right:
            equations.append(np.outer(moved, w).reshape(-1) % p)
    return equations


def _minor_equations(
    stacked: np.ndarray,
    basis_v: np.ndarray,
    allowed_rank: int,
    p: int
) -> List[np.ndarray]:
    """
    First-order expansion of every (allowed_rank + 1)-minor of stacked.

    d/d eps det(M0[R, C] + eps M1[R, C]) = sum over (i, j) of
    M1[R_i, C_j] * cofactor(i, j), and M1[r, c] = sum_k basis_v[r, k] Y[k, c]
    for V rows r.
    """
    n_rows, d = stacked.shape
    n_v = basis_v.shape[0]
    size = allowed_rank + 1
    rows_all = stacked.tolist()
    equations = []
    for rows in itertools.combinations(range(n_rows), size):
        moving = [i for i, r in enumerate(rows) if r < n_v]
        if not moving:
            continue
        for cols in itertools.combinations(range(d), size):
            sub = [[rows_all[r][c] for c in cols] for r in rows]
            coefficients = np.zeros((d, d), dtype=np.int64)
            for i in moving:
                for j, col in enumerate(cols):
                    minor = [row[:j] + row[j + 1:] for k, row in enumerate(sub) if k != i]
                    cofactor = det_rows(minor, p) * (-1 if (i + j) % 2 else 1)
                    if cofactor % p:
                        coefficients[:, col] += basis_v[rows[i]] * cofactor
            equations.append(coefficients.reshape(-1) % p)
    return equations


def linearized_conditions(
    point: Flag,
    spec: LocusSpec,
    method: TangentMethod = "kernel"
) -> List[np.ndarray]:
    """
    Linear equations in Y (d x d, flattened) cutting out first-order
    deformations V -> V(1 + eps Y) that stay in the locus.
    """
    p = point.field.p
    d = point.d
    equations: List[np.ndarray] = []
    basis = point.array()
    for sigma, ref in zip(spec.perms, spec.flags):
        table = rank_table(sigma)
        for a, b in sorted(essential_set(sigma)):
            required = table(a, b)
            basis_v = basis[a:]
            stacked = np.vstack([basis_v, ref.array()[b:]]) % p
            allowed = stacked.shape[0] - required
            if allowed >= d:
                continue
            current = rank_array(stacked, p)
            if current > allowed:
                raise PointNotInLocusError(
                    f"Point violates dim V^{a} meet F^{b} >= {required} for {sigma}"
                )
            if current < allowed:
                continue
            if method == "kernel":
                equations.extend(_kernel_equations(stacked, basis_v, allowed, p))
            elif method == "minors":
                equations.extend(_minor_equations(stacked, basis_v, allowed, p))
            else:
                raise ValueError(f"Unknown tangent method: {method}")
    return equations


@lru_cache(maxsize=256)
def _versal(flags: Tuple[Flag, ...]) -> bool:
    return len(flags) == 1 or m_dim(flags) == 0


def tangent_dim(point: Flag, spec: LocusSpec, method: TangentMethod = "kernel") -> TangentReport:
    """
    Zariski tangent dimension of the locus at point.

    Deformations V(1 + eps Y) are parameterized by Y in End H; the essential
    rank conditions are expanded to first order, and the deformations that
    fix the flag (dimension d^2 - dim Fl) are subtracted.

    Raises:
        PointNotInLocusError: If point is not in the locus
        IncompatibleLocusError: If the reference flags are not versal, so the
            locus has no expected dimension
    """
    if not satisfies(point, spec, "essential"):
        raise PointNotInLocusError(f"Point is not on {spec.label()}")
    if not _versal(spec.flags):
        raise IncompatibleLocusError(f"Reference flags of {spec.label()} are not versal")

    d = point.d
    equations = linearized_conditions(point, spec, method)
    constrained = rank_array(np.array(equations), point.field.p) if equations else 0
    ambient = flag_variety_dim(d, point.coranks)
    tangent = ambient - constrained
    locus_dim = spec.expected_dim()
    return TangentReport(point, spec, locus_dim, tangent, tangent == locus_dim)


# ---------------------------------------------------------------------------
# Count polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountPolynomial:
    """
    An integer polynomial in q, coefficients ascending.

    Attributes:
        coefficients: c_0, c_1, ..., with trailing zeros stripped
        samples: The (q, count) pairs it was fitted to, if any
    """
    coefficients: Tuple[int, ...]
    samples: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        coefficients = list(self.coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, q: int) -> int:
        return sum(c * q ** k for k, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        q = sympy.Symbol("q")
        return str(sympy.expand(sum(c * q ** k for k, c in enumerate(self.coefficients))))


def point_count_poly(
    count_at: Callable[[FieldSpec], int],
    q_list: Sequence[int],
    degree_bound: int
) -> CountPolynomial:
    """
    Interpolate point counts exactly.

    Args:
        count_at: Returns |locus(F_q)| for a field
        q_list: Distinct primes, at least degree_bound + 2 of them
        degree_bound: A proven upper bound on the degree

    Returns:
        The interpolating polynomial; its degree is the locus dimension

    Raises:
        ValueError: If q_list is too short or has repeats
        CountsNotPolynomialError: If the counts do not fit an integer
            polynomial of degree <= degree_bound
    """
    q_list = list(q_list)
    if len(set(q_list)) != len(q_list):
        raise ValueError(f"Sample fields must be distinct: {q_list}")
    if len(q_list) < degree_bound + 2:
        raise ValueError(
            f"Need at least {degree_bound + 2} sample fields for degree bound {degree_bound}, "
            f"got {len(q_list)}"
        )

    samples = tuple((q, count_at(FieldSpec(q))) for q in q_list)
    symbol = sympy.Symbol("q")
    poly = sympy.Poly(sympy.interpolate([(sympy.Integer(q), sympy.Integer(c)) for q, c in samples], symbol), symbol)
    coefficients = [sympy.Rational(c) for c in reversed(poly.all_coeffs())]

    if any(c.q != 1 for c in coefficients):
        raise CountsNotPolynomialError(f"Counts {samples} interpolate to non-integer coefficients")
    result = CountPolynomial(tuple(int(c) for c in coefficients), samples)
    if result.degree > degree_bound:
        raise CountsNotPolynomialError(
            f"Counts {samples} need degree {result.degree} > bound {degree_bound}"
        )
    logger.debug(f"Interpolated {samples} -> {result}")
    return result


def schubert_count_polynomial(sigma: Perm) -> CountPolynomial:
    """Sum of q^inv(pi) over pi <= sigma (cell decomposition)."""
    coefficients = [0] * (comb(sigma.d, 2) + 1)
    for pi in all_perms(sigma.d):
        if bruhat_leq(pi, sigma):
            coefficients[inversions(pi)] += 1
    return CountPolynomial(tuple(coefficients))


def poincare_polynomial(d: int) -> CountPolynomial:
    """Sum of q^inv(pi) over S_d, the point count of Fl(d)."""
    return schubert_count_polynomial(descending(d))


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class ImageRow:
    """One relative position in an image table."""
    position: Perm
    nonempty: bool
    predicted: bool
    witness: Optional[Flag] = None

    @property
    def agrees(self) -> bool:
        return self.nonempty == self.predicted


@dataclass
class ImageTable:
    """Nonemptiness of R_{sigma,tau}(P, Q) for one pair (P, Q) per relative position."""
    sigma: Perm
    tau: Perm
    bound: Perm
    rows: List[ImageRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.agrees for row in self.rows)


class ImageSweep:
    """
    Shared data for image checks over all (sigma, tau) at fixed (d, q).

    For each relative position pi the representative pair is
    adapted_flags(pi) = (E, Q_pi). Every point V is reduced to the pair of
    positions (pos(V, E), pos(V, Q_pi)); R_{sigma,tau} is nonempty exactly
    when some recorded pair is bounded by (sigma, tau).
    """

    def __init__(
        self,
        d: int,
        field: FieldSpec,
        budget: Optional[Budget] = None,
        threads: int = 1
    ):
        self.d = d
        self.field = field
        self.fv = enumerate_flags(d, field, budget=budget)
        self.perms = all_perms(d)
        self.pairs: Dict[Perm, Dict[Tuple[Perm, Perm], int]] = {}

        references = [adapted_flags(pi, field)[1] for pi in self.perms]
        standard = Flag.coordinate(d, field)
        index = PositionIndex(self.fv, [standard] + references, threads)
        for k, pi in enumerate(self.perms):
            seen: Dict[Tuple[Perm, Perm], int] = {}
            for point_index, positions in enumerate(index.positions):
                seen.setdefault((positions[0], positions[k + 1]), point_index)
            self.pairs[pi] = seen
        self._upsets = {b: frozenset(t for t in self.perms if bruhat_leq(b, t)) for b in self.perms}
        self._reachable: Dict[Tuple[Perm, Perm], FrozenSet[Perm]] = {}
        logger.info(f"Image sweep ready: {len(self.fv)} flags, {len(self.perms)} positions")

    def _reachable_taus(self, pi: Perm, sigma: Perm) -> FrozenSet[Perm]:
        key = (pi, sigma)
        if key not in self._reachable:
            taus: Set[Perm] = set()
            for (a, b) in self.pairs[pi]:
                if bruhat_leq(a, sigma):
                    taus |= self._upsets[b]
            self._reachable[key] = frozenset(taus)
        return self._reachable[key]

    def witness(self, pi: Perm, sigma: Perm, tau: Perm) -> Optional[Flag]:
        for (a, b), point_index in self.pairs[pi].items():
            if bruhat_leq(a, sigma) and bruhat_leq(b, tau):
                return self.fv.points[point_index]
        return None

    def table(self, sigma: Perm, tau: Perm) -> ImageTable:
        bound = star(tau, sigma.inverse())
        result = ImageTable(sigma, tau, bound)
        for pi in self.perms:
            nonempty = tau in self._reachable_taus(pi, sigma)
            result.rows.append(ImageRow(
                position=pi,
                nonempty=nonempty,
                predicted=bruhat_leq(pi, bound),
                witness=self.witness(pi, sigma, tau) if nonempty else None,
            ))
        return result


def verify_image(
    sigma: Perm,
    tau: Perm,
    d: int,
    field: FieldSpec,
    budget: Optional[Budget] = None,
    threads: int = 1
) -> ImageTable:
    """
    For every relative position pi, whether R_{sigma,tau}(P, Q) has an F_q point
    for the representative pair (P, Q) = adapted_flags(pi), next to the
    prediction pi <= tau * sigma^-1.
    """
    return ImageSweep(d, field, budget, threads).table(sigma, tau)


@dataclass
class SmoothLocusReport:
    """Pointwise comparison of the smooth locus of R with those of X_sigma and X_tau."""
    sigma: Perm
    tau: Perm
    points: int = 0
    singular_points: int = 0
    mismatches: List[Flag] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def verify_smooth_locus(
    sigma: Perm,
    tau: Perm,
    d: int,
    field: FieldSpec,
    budget: Optional[Budget] = None,
    threads: int = 1,
    fv: Optional[FlagVariety] = None
) -> SmoothLocusReport:
    """
    At every F_q point x of R_{sigma,tau}(P, Q) for transverse (P, Q), check
    smooth(R, x) iff smooth(X_sigma(P), x) and smooth(X_tau(Q), x).
    """
    if fv is None:
        fv = enumerate_flags(d, field, budget=budget)
    p_flag, q_flag = adapted_flags(descending(d), field)
    spec_r = LocusSpec.richardson(sigma, tau, p_flag, q_flag)
    spec_s = LocusSpec.schubert(sigma, p_flag)
    spec_t = LocusSpec.schubert(tau, q_flag)

    def check(point: Flag) -> Tuple[bool, bool]:
        smooth_r = tangent_dim(point, spec_r).smooth
        smooth_parts = tangent_dim(point, spec_s).smooth and tangent_dim(point, spec_t).smooth
        return smooth_r, smooth_parts

    points = locus_points(spec_r, fv, threads=threads)
    report = SmoothLocusReport(sigma, tau, points=len(points))
    for point, (smooth_r, smooth_parts) in zip(points, parallel_map(check, points, threads)):
        if not smooth_r:
            report.singular_points += 1
        if smooth_r != smooth_parts:
            report.mismatches.append(point)
    return report


@dataclass
class MultiProductReport:
    """Product structure of D_{sigma_1..sigma_l}(F; V_1..V_l) on Fl(d)^l."""
    sigmas: Tuple[Perm, ...]
    points: int = 0
    product_points: int = 0
    sets_equal: bool = False
    open_points: int = 0
    expected_open_points: int = 0
    expected_codim: int = 0
    degree: Optional[int] = None
    expected_degree: int = 0

    @property
    def passed(self) -> bool:
        degree_ok = self.degree is None or self.degree == self.expected_degree
        return self.sets_equal and self.open_points == self.expected_open_points and degree_ok


def verify_multi_product(
    sigmas: Sequence[Perm],
    d: int,
    field: FieldSpec,
    budget: Optional[Budget] = None,
    threads: int = 1,
    q_list: Optional[Sequence[int]] = None
) -> MultiProductReport:
    """
    On S = Fl(d)^l with tautological flags V_i and the standard flag F, compare
    D = {(V_i) : pos(F, V_i) <= sigma_i for all i} with the product of the
    Schubert varieties X_{sigma_i^-1}(F), coordinate by coordinate.

    If q_list is given, the degree of the count polynomial is the sum of the
    interpolated factor degrees and must equal dim S minus the sum of coinversions.
    """
    sigmas = tuple(sigmas)
    budget = budget or Budget.from_env()
    budget.check(d, field.p, copies=len(sigmas))
    fv = enumerate_flags(d, field, budget=budget)
    standard = Flag.coordinate(d, field)
    index = PositionIndex(fv, [standard], threads)
    # pos(F, V) is the inverse of pos(V, F)
    from_f = [positions[0].inverse() for positions in index.positions]

    in_locus = set()
    open_points = 0
    for combo in itertools.product(range(len(fv)), repeat=len(sigmas)):
        if all(bruhat_leq(from_f[i], s) for i, s in zip(combo, sigmas)):
            in_locus.add(combo)
            if all(from_f[i] == s for i, s in zip(combo, sigmas)):
                open_points += 1

    position = {point: i for i, point in enumerate(fv.points)}
    factors = []
    for s in sigmas:
        factor = locus_points(LocusSpec.schubert(s.inverse(), standard), fv, threads=threads)
        factors.append([position[point] for point in factor])
    product_set = set(itertools.product(*factors))

    report = MultiProductReport(
        sigmas=sigmas,
        points=len(in_locus),
        product_points=len(product_set),
        sets_equal=in_locus == product_set,
        open_points=open_points,
        expected_open_points=prod(field.p ** inversions(s) for s in sigmas),
        expected_codim=sum(coinversions(s) for s in sigmas),
    )
    report.expected_degree = len(sigmas) * comb(d, 2) - report.expected_codim

    if q_list is not None:
        degree = 0
        for s in sigmas:
            target = s.inverse()

            def count_at(f: FieldSpec, target=target) -> int:
                variety = enumerate_flags(d, f, budget=budget)
                return len(locus_points(LocusSpec.schubert(target, Flag.coordinate(d, f)), variety, threads=threads))

            degree += point_count_poly(count_at, q_list, comb(d, 2)).degree
        report.degree = degree
    return report


def richardson_count(
    sigma: Perm,
    tau: Perm,
    field: FieldSpec
) -> int:
    """
    |R_{sigma,tau}(E, E_rev)(F_q)| for the transverse coordinate pair, by
    enumerating the cells of the Schubert variety with fewer inversions.

    Swapping sigma and tau is harmless: conjugating by the longest element
    exchanges E and E_rev.
    """
    if inversions(tau) < inversions(sigma):
        sigma, tau = tau, sigma
    d = sigma.d
    reverse = adapted_flags(descending(d), field)[1]
    reverse_inv = inverse_array(reverse.array(), field.p)
    return sum(
        1 for point in schubert_cell_union(sigma, field)
        if bruhat_leq(relative_position(point, reverse, reverse_inv), tau)
    )


def singular_polynomial(sigma: Perm, field: FieldSpec) -> CountPolynomial:
    """
    Count polynomial of the singular locus of X_sigma(E): the sum of
    q^inv(pi) over pi <= sigma whose coordinate flag is a singular point.
    """
    d = sigma.d
    spec = LocusSpec.schubert(sigma, Flag.coordinate(d, field))
    coefficients = [0] * (comb(d, 2) + 1)
    for pi in all_perms(d):
        if bruhat_leq(pi, sigma) and not tangent_dim(coordinate_flag(pi, field), spec).smooth:
            coefficients[inversions(pi)] += 1
    return CountPolynomial(tuple(coefficients))


def worked_example_nests() -> Tuple[NestOfSets, NestOfSets]:
    """The d = 5 pair {0..4} > {0,2,4} > {} and {0..4} > {0,1,2} > {}."""
    full = range(5)
    return (
        NestOfSets.from_sets([full, {0, 2, 4}, ()]),
        NestOfSets.from_sets([full, {0, 1, 2}, ()]),
    )

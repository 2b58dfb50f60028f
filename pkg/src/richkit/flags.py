"""
Flags over F_p as adapted bases.

A flag is stored as an ordered basis v_0, ..., v_{d-1} of F_p^d; its stratum
of codimension a is span{v_a, ..., v_{d-1}}, for every a in its coranks.
Endomorphisms act on row vectors from the right (v -> v phi), and End H is
identified with F_p^{d^2} through row-major flattening of phi.

This module is responsible for:
- The Flag value type and coordinate/adapted constructions
- Relative position of two complete flags (associated permutation)
- Fix spaces, the invFix identity and the deformation space M
- The first-order map delta_x and the pointwise versality test
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exactla import (
    FieldSpec,
    Matrix,
    Subspace,
    inverse_array,
    intersect,
    kernel,
    quotient_coordinates,
    rank_array,
    subspace_sum,
)
from .perm_core import (
    Perm,
    RankTable,
    complete_coranks,
    perm_from_rank_table,
    validate_coranks,
)

logger = logging.getLogger(__name__)


class InvalidFlagError(ValueError):
    """Raised when a basis does not define a flag of the declared shape."""
    pass


class FamilyShapeError(ValueError):
    """Raised when first-order family data have inconsistent dimensions."""
    pass


@dataclass(frozen=True, eq=False)
class Flag:
    """
    A complete or partial flag in F_p^d given by an adapted basis.

    Two Flags compare equal when all their strata agree, regardless of
    the adapted basis used to present them.

    Attributes:
        d: Ambient dimension
        field: The base field
        coranks: Codimensions of the strata (0, ..., d for complete flags)
        basis: d row vectors v_0, ..., v_{d-1}
    """
    d: int
    field: FieldSpec
    coranks: Tuple[int, ...]
    basis: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        coranks = tuple(self.coranks)
        basis = tuple(tuple(int(x) % self.field.p for x in v) for v in self.basis)
        object.__setattr__(self, "coranks", coranks)
        object.__setattr__(self, "basis", basis)

        try:
            validate_coranks(self.d, coranks)
        except ValueError as e:
            raise InvalidFlagError(str(e)) from e
        if len(basis) != self.d or any(len(v) != self.d for v in basis):
            raise InvalidFlagError(f"A flag in F_p^{self.d} needs {self.d} vectors of length {self.d}")
        if rank_array(np.array(basis, dtype=np.int64).reshape(self.d, self.d), self.field.p) != self.d:
            raise InvalidFlagError("Basis is not full rank")

    @property
    def is_complete(self) -> bool:
        return self.coranks == complete_coranks(self.d)

    def stratum(self, a: int) -> Subspace:
        """The codimension-a subspace; a must be one of the coranks."""
        if a not in self.coranks:
            raise InvalidFlagError(f"Flag has no stratum of codimension {a} (coranks {self.coranks})")
        return Subspace.span(self.basis[a:], self.d, self.field)

    @cached_property
    def key(self) -> Tuple:
        """Canonical identity: the RREF of every proper stratum."""
        inner = tuple(self.stratum(a).basis.entries for a in self.coranks[1:-1])
        return (self.d, self.field.p, self.coranks, inner)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Flag):
            return False
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def array(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.d, self.d)

    def matrix(self) -> Matrix:
        return Matrix.from_rows(self.basis, self.field, cols=self.d)

    def transform(self, g: Matrix) -> "Flag":
        """The flag with basis rows v_i g."""
        if g.rows != self.d or g.cols != self.d:
            raise InvalidFlagError(f"Transformation must be {self.d}x{self.d}")
        new_basis = (self.array() @ g.array()) % self.field.p
        return Flag(self.d, self.field, self.coranks, tuple(tuple(int(x) for x in row) for row in new_basis))

    def with_coranks(self, coranks: Sequence[int]) -> "Flag":
        """Forget strata: keep only the given coranks (a subset of ours)."""
        if not set(coranks) <= set(self.coranks):
            raise InvalidFlagError(f"Coranks {tuple(coranks)} are not a subset of {self.coranks}")
        return Flag(self.d, self.field, tuple(coranks), self.basis)

    @classmethod
    def coordinate(cls, d: int, f: FieldSpec, coranks: Optional[Sequence[int]] = None) -> "Flag":
        """The standard flag with stratum a = span{e_a, ..., e_{d-1}}."""
        return coordinate_flag(Perm.identity(d), f, coranks)


def _unit(d: int, i: int) -> Tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(d))


def coordinate_flag(pi: Perm, f: FieldSpec, coranks: Optional[Sequence[int]] = None) -> Flag:
    """The T-fixed flag with basis v_a = e_{pi(a)}."""
    d = pi.d
    coranks = tuple(coranks) if coranks is not None else complete_coranks(d)
    return Flag(d, f, coranks, tuple(_unit(d, pi(a)) for a in range(d)))


def reversed_coordinate_flag(d: int, f: FieldSpec) -> Flag:
    """The flag with stratum b = span{e_0, ..., e_{d-1-b}}, transverse to the standard one."""
    return Flag(d, f, complete_coranks(d), tuple(_unit(d, d - 1 - b) for b in range(d)))


def _check_pair(p: Flag, q: Flag) -> None:
    if not (p.is_complete and q.is_complete):
        raise InvalidFlagError("Both flags must be complete")
    if p.d != q.d or p.field != q.field:
        raise InvalidFlagError(
            f"Flags live in different spaces: F_{p.field.p}^{p.d} vs F_{q.field.p}^{q.d}"
        )


def intersection_dim(p: Flag, a: int, q: Flag, b: int) -> int:
    """dim(P^a intersected with Q^b), via rank of the stacked bases."""
    rows_p, rows_q = p.basis[a:], q.basis[b:]
    if not rows_p or not rows_q:
        return 0
    stacked = np.array(rows_p + rows_q, dtype=np.int64)
    return len(rows_p) + len(rows_q) - rank_array(stacked, p.field.p)


def assoc_perm(p: Flag, q: Flag) -> Perm:
    """
    The unique Perm s with dim P^a intersected with Q^b = r_s(a, b) for all a, b.

    Builds the rank table from pairwise subspace intersections and reads the
    permutation off it.

    Raises:
        InvalidFlagError: If either flag is partial or they live in different spaces
    """
    _check_pair(p, q)
    d = p.d
    values = [[0] * (d + 1) for _ in range(d + 1)]
    strata_p = [p.stratum(a) for a in range(d)]
    strata_q = [q.stratum(b) for b in range(d)]
    for a in range(d):
        for b in range(d):
            values[a][b] = intersect(strata_p[a], strata_q[b]).dim
    return perm_from_rank_table(RankTable(d, tuple(tuple(row) for row in values)))


def relative_position(p: Flag, q: Flag, q_inverse: Optional[np.ndarray] = None) -> Perm:
    """
    Same result as assoc_perm(p, q), by one elimination pass.

    P's basis is written in the coordinates of Q's adapted basis, where Q
    becomes the standard flag. Rows are then reduced bottom-up so that each
    has its leading (lowest-index) nonzero entry in a column no later row
    uses; that column sequence is the relative position.

    Args:
        p: First complete flag
        q: Second complete flag
        q_inverse: Optional precomputed inverse of q's basis matrix
    """
    _check_pair(p, q)
    prime = p.field.p
    if q_inverse is None:
        q_inverse = inverse_array(q.array(), prime)
    coords = (p.array() @ q_inverse) % prime

    d = p.d
    reduced: dict = {}  # pivot column -> normalized row
    word = [0] * d
    for a in range(d - 1, -1, -1):
        row = [int(x) for x in coords[a]]
        while True:
            c = next(j for j, x in enumerate(row) if x)
            other = reduced.get(c)
            if other is None:
                break
            factor = row[c]
            row = [(x - factor * y) % prime for x, y in zip(row, other)]
        scale = pow(row[c], prime - 2, prime)
        reduced[c] = [x * scale % prime for x in row]
        word[a] = c
    return Perm(tuple(word))


def adapted_flags(s: Perm, f: FieldSpec) -> Tuple[Flag, Flag]:
    """
    A pair of coordinate flags in relative position s.

    P is the standard flag and Q has basis w_b = e_{s^-1(b)}, so that
    Q^b = span{e_{s^-1(b)}, ..., e_{s^-1(d-1)}} and
    dim P^a intersected with Q^b = #{a' >= a : s(a') >= b} = r_s(a, b).
    """
    return Flag.coordinate(s.d, f), coordinate_flag(s.inverse(), f)


def fix_space(p: Flag) -> Subspace:
    """
    Endomorphisms phi (flattened row-major) with V phi contained in V for every stratum V.

    For a complete flag the dimension is d(d+1)/2.
    """
    d, f = p.d, p.field
    equations: List[np.ndarray] = []
    for a in p.coranks[1:-1]:
        annihilator = p.stratum(a).annihilator().array()
        for k in range(a, d):
            v = np.array(p.basis[k], dtype=np.int64)
            for n in annihilator:
                equations.append(np.outer(v, n).reshape(-1) % f.p)
    if not equations:
        return Subspace.full(d * d, f)
    return kernel(Matrix.from_array(np.array(equations), f), f)


def invfix_check(p: Flag, q: Flag) -> int:
    """d^2 - dim(Fix P + Fix Q); equals coinversions(assoc_perm(p, q))."""
    _check_pair(p, q)
    return p.d * p.d - subspace_sum(fix_space(p), fix_space(q)).dim


def _check_tuple(flags: Sequence[Flag]) -> None:
    if not flags:
        raise InvalidFlagError("At least one flag is required")
    for other in flags:
        _check_pair(flags[0], other)


def m_dim(flags: Sequence[Flag]) -> int:
    """
    Dimension of M = coker(End H -> product of End H / Fix P_i).

    The diagonal map is assembled as an explicit matrix whose rows are the
    quotient coordinates of every product factor, one column per basis
    endomorphism E_kl.
    """
    _check_tuple(flags)
    d, f = flags[0].d, flags[0].field
    basis_endos = np.eye(d * d, dtype=np.int64)
    blocks = [quotient_coordinates(basis_endos, fix_space(flag)) for flag in flags]
    images = np.concatenate(blocks, axis=1)  # row j = image of the j-th basis endomorphism
    codomain_dim = images.shape[1]
    if codomain_dim == 0:
        return 0
    return codomain_dim - rank_array(images, f.p)


@dataclass(frozen=True)
class FirstOrderFamily:
    """
    First-order data of a family of flag tuples at a base point x.

    Attributes:
        base_tangent_dim: m = dim T_x S
        flags: The l flags at x
        deformations: For each of the m directions, one d x d matrix per flag
            giving the first-order motion of that flag's adapted basis
    """
    base_tangent_dim: int
    flags: Tuple[Flag, ...]
    deformations: Tuple[Tuple[Matrix, ...], ...] = ()

    def __post_init__(self):
        flags = tuple(self.flags)
        deformations = tuple(tuple(direction) for direction in self.deformations)
        object.__setattr__(self, "flags", flags)
        object.__setattr__(self, "deformations", deformations)

        if len(deformations) != self.base_tangent_dim:
            raise FamilyShapeError(
                f"Expected {self.base_tangent_dim} deformation directions, got {len(deformations)}"
            )
        try:
            _check_tuple(flags)
        except InvalidFlagError as e:
            raise FamilyShapeError(str(e)) from e
        d = flags[0].d
        for t, direction in enumerate(deformations):
            if len(direction) != len(flags):
                raise FamilyShapeError(
                    f"Direction {t} has {len(direction)} matrices for {len(flags)} flags"
                )
            for m in direction:
                if m.rows != d or m.cols != d:
                    raise FamilyShapeError(f"Direction {t} has a {m.rows}x{m.cols} matrix, expected {d}x{d}")


def _relative_deformation_space(flags: Sequence[Flag]) -> Subspace:
    """Fix P_1 + ... + Fix P_l plus the diagonal copy of End H, inside (End H)^l."""
    d, f = flags[0].d, flags[0].field
    n, count = d * d, len(flags)
    generators = []
    for i, flag in enumerate(flags):
        fix = fix_space(flag).array()
        block = np.zeros((fix.shape[0], n * count), dtype=np.int64)
        block[:, i * n:(i + 1) * n] = fix
        generators.append(block)
    generators.append(np.tile(np.eye(n, dtype=np.int64), (1, count)))
    return Subspace.from_array(np.vstack(generators), f)


def delta_matrix(fam: FirstOrderFamily) -> Matrix:
    """
    The m x dim(M) matrix of delta_x : T_x S -> M.

    Direction t moves the adapted basis B_i to B_i + eps D_ti, which is
    B_i (1 + eps phi_ti) with phi_ti = B_i^-1 D_ti. The tuple (phi_ti)_i is
    projected to (End H)^l modulo (Fix P_1 + ... + Fix P_l + diagonal).
    """
    flags = fam.flags
    d, f = flags[0].d, flags[0].field
    relations = _relative_deformation_space(flags)
    dim_m = d * d * len(flags) - relations.dim
    if fam.base_tangent_dim == 0:
        return Matrix.zeros(0, dim_m)

    inverses = [inverse_array(flag.array(), f.p) for flag in flags]
    rows = []
    for direction in fam.deformations:
        phis = [(inv @ m.array()) % f.p for inv, m in zip(inverses, direction)]
        rows.append(np.concatenate([phi.reshape(-1) for phi in phis]))
    coords = quotient_coordinates(np.array(rows), relations)
    return Matrix.from_array(coords.reshape(fam.base_tangent_dim, dim_m), f)


def is_versal_at_point(fam: FirstOrderFamily) -> bool:
    """True iff delta_x is surjective (base smoothness is the caller's assertion)."""
    delta = delta_matrix(fam)
    if delta.cols == 0:
        return True
    return rank_array(delta.array(), fam.flags[0].field.p) == delta.cols

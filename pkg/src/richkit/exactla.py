"""
Exact linear algebra over prime fields F_p.

This module is responsible for:
- Field and matrix value types (entries reduced to [0, p))
- Reduced row-echelon form, rank, kernels and cokernel dimensions
- Canonical subspaces (RREF basis without zero rows) with intersections and sums
- Quotient coordinates used to assemble maps into V / W

Vectors are rows. Elimination runs on numpy int64 arrays; with p <= 251
every product of two entries fits comfortably.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

logger = logging.getLogger(__name__)

MAX_PRIME = 251


class InvalidFieldError(ValueError):
    """Raised when the modulus is not a prime in [2, 251]."""
    pass


class DimensionMismatchError(ValueError):
    """Raised when subspaces or matrices of incompatible shapes are combined."""
    pass


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p."""
    p: int

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME) or not isprime(self.p):
            raise InvalidFieldError(
                f"Field modulus must be a prime between 2 and {MAX_PRIME}, got {self.p}"
            )

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a nonzero element."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class Matrix:
    """
    A rows x cols matrix over F_p, row-major.

    Attributes:
        rows: Number of rows
        cols: Number of columns
        entries: rows * cols integers in [0, p)
    """
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(entries)}"
            )
        if any(x < 0 for x in entries):
            raise ValueError("Matrix entries must be reduced to [0, p)")

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[int]],
        f: FieldSpec,
        cols: Optional[int] = None
    ) -> "Matrix":
        """Build a matrix from row lists, reducing entries mod p."""
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionMismatchError("All rows must have the same length")
        return cls(len(rows), cols, tuple(x % f.p for r in rows for x in r))

    @classmethod
    def from_array(cls, array: np.ndarray, f: FieldSpec) -> "Matrix":
        array = np.asarray(array, dtype=np.int64) % f.p
        rows, cols = array.shape
        return cls(rows, cols, tuple(int(x) for x in array.reshape(-1)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def to_rows(self) -> List[Tuple[int, ...]]:
        return [
            self.entries[i * self.cols:(i + 1) * self.cols]
            for i in range(self.rows)
        ]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )


def _rref_array(array: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Row-reduce a copy of array mod p; returns (rref, pivot columns)."""
    a = np.array(array, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot_row = r + int(nonzero[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        column = a[:, c].copy()
        column[r] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            a[targets] = (a[targets] - np.outer(column[targets], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_array(array: np.ndarray, p: int) -> int:
    """Rank of a numpy array mod p."""
    if array.size == 0:
        return 0
    return len(_rref_array(array, p)[1])


def rref(m: Matrix, f: FieldSpec) -> Matrix:
    """Reduced row-echelon form of m (same shape, zero rows at the bottom)."""
    if m.rows == 0 or m.cols == 0:
        return m
    reduced, _ = _rref_array(m.array(), f.p)
    return Matrix.from_array(reduced, f)


def rank(m: Matrix, f: FieldSpec) -> int:
    return rank_array(m.array(), f.p)


def matmul(a: Matrix, b: Matrix, f: FieldSpec) -> Matrix:
    if a.cols != b.rows:
        raise DimensionMismatchError(f"Cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return Matrix.from_array(a.array() @ b.array(), f)


def inverse_array(array: np.ndarray, p: int) -> np.ndarray:
    """
    Inverse of a square array mod p via RREF of [A | I].

    Raises:
        ValueError: If the array is singular
    """
    n = array.shape[0]
    augmented = np.concatenate([np.asarray(array, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    reduced, pivots = _rref_array(augmented, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("Matrix is singular")
    return reduced[:, n:]


def inverse(m: Matrix, f: FieldSpec) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatchError("Only square matrices can be inverted")
    return Matrix.from_array(inverse_array(m.array(), f.p), f)


def det_rows(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant mod p of a small square matrix given as row lists."""
    a = [[x % p for x in row] for row in rows]
    n = len(a)
    det = 1
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], p - 2, p)
        for r in range(c + 1, n):
            if a[r][c]:
                factor = a[r][c] * inv % p
                a[r] = [(x - factor * y) % p for x, y in zip(a[r], a[c])]
    return det % p


def random_invertible(n: int, f: FieldSpec, rng: np.random.Generator) -> Matrix:
    """Draw uniformly random matrices until one is invertible."""
    while True:
        candidate = rng.integers(0, f.p, size=(n, n), dtype=np.int64)
        if rank_array(candidate, f.p) == n:
            return Matrix.from_array(candidate, f)


@dataclass(frozen=True)
class Subspace:
    """
    A subspace of F_p^n, stored by its RREF basis without zero rows.

    The RREF basis is canonical, so two Subspaces are equal exactly when
    they are the same subspace.
    """
    ambient_dim: int
    basis: Matrix
    field: FieldSpec

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatchError(
                f"Basis has {self.basis.cols} columns, ambient dimension is {self.ambient_dim}"
            )

    @property
    def dim(self) -> int:
        return self.basis.rows

    @classmethod
    def span(
        cls,
        vectors: Sequence[Sequence[int]],
        ambient_dim: int,
        f: FieldSpec
    ) -> "Subspace":
        """Canonical subspace spanned by the given row vectors."""
        vectors = [list(v) for v in vectors]
        if not vectors:
            return cls.zero(ambient_dim, f)
        array = np.array(vectors, dtype=np.int64).reshape(len(vectors), ambient_dim)
        return cls.from_array(array, f)

    @classmethod
    def from_array(cls, array: np.ndarray, f: FieldSpec) -> "Subspace":
        ambient_dim = array.shape[1]
        if array.shape[0] == 0:
            return cls.zero(ambient_dim, f)
        reduced, pivots = _rref_array(array, f.p)
        return cls(ambient_dim, Matrix.from_array(reduced[:len(pivots)], f), f)

    @classmethod
    def zero(cls, ambient_dim: int, f: FieldSpec) -> "Subspace":
        return cls(ambient_dim, Matrix.zeros(0, ambient_dim), f)

    @classmethod
    def full(cls, ambient_dim: int, f: FieldSpec) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim), f)

    def vectors(self) -> List[Tuple[int, ...]]:
        return self.basis.to_rows()

    def array(self) -> np.ndarray:
        return self.basis.array().reshape(self.dim, self.ambient_dim)

    def pivots(self) -> List[int]:
        """Pivot column of each basis row."""
        return [next(j for j, x in enumerate(row) if x) for row in self.vectors()]

    def contains(self, vector: Sequence[int]) -> bool:
        stacked = np.vstack([self.array(), np.array(vector, dtype=np.int64).reshape(1, -1)])
        return rank_array(stacked, self.field.p) == self.dim

    def annihilator(self) -> "Subspace":
        """All x with <v, x> = 0 for every v in the subspace."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim, self.field)
        return kernel(self.basis, self.field)


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatchError(
            f"Ambient dimension mismatch: {u.ambient_dim} vs {v.ambient_dim}"
        )
    if u.field != v.field:
        raise DimensionMismatchError(f"Field mismatch: F_{u.field.p} vs F_{v.field.p}")


def kernel(m: Matrix, f: FieldSpec) -> Subspace:
    """Right null space {x : m x = 0} as a canonical Subspace of F_p^cols."""
    if m.cols == 0:
        return Subspace.zero(0, f)
    if m.rows == 0:
        return Subspace.full(m.cols, f)
    reduced, pivots = _rref_array(m.array(), f.p)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for j in free:
        x = np.zeros(m.cols, dtype=np.int64)
        x[j] = 1
        for i, c in enumerate(pivots):
            x[c] = (-reduced[i, j]) % f.p
        vectors.append(x)
    if not vectors:
        return Subspace.zero(m.cols, f)
    return Subspace.from_array(np.array(vectors), f)


def cokernel_dim(m: Matrix, f: FieldSpec) -> int:
    """Dimension of F_p^rows / image(m), for m acting on column vectors."""
    return m.rows - rank(m, f)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    """u + v."""
    _check_ambient(u, v)
    if u.dim == 0:
        return v
    if v.dim == 0:
        return u
    return Subspace.from_array(np.vstack([u.array(), v.array()]), u.field)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """u and v intersected, as the annihilator of ann(u) + ann(v)."""
    _check_ambient(u, v)
    both = subspace_sum(u.annihilator(), v.annihilator())
    if both.dim == 0:
        return Subspace.full(u.ambient_dim, u.field)
    return kernel(both.basis, u.field)


def quotient_coordinates(vectors: np.ndarray, sub: Subspace) -> np.ndarray:
    """
    Coordinates of row vectors in F_p^n / sub.

    Each vector is reduced against the RREF basis of sub and the entries at
    the non-pivot columns are returned. The resulting linear map has kernel
    exactly sub, and its target has dimension n - dim(sub).
    """
    p = sub.field.p
    reduced = np.array(vectors, dtype=np.int64).reshape(-1, sub.ambient_dim) % p
    pivots = sub.pivots()
    basis = sub.array()
    for row, c in zip(basis, pivots):
        reduced = (reduced - np.outer(reduced[:, c], row)) % p
    keep = [j for j in range(sub.ambient_dim) if j not in pivots]
    return reduced[:, keep]

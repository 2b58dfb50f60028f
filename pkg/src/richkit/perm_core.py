"""
Permutation combinatorics on [d] = {0, ..., d-1}.

This module is responsible for:
- One-line permutations (0-indexed) and their composition/inversion
- Inversion and coinversion counts
- Rank tables r(a, b) = #{a' >= a : p(a') >= b} and the inverse construction
- Bruhat order (p <= q iff rank_table(p) >= rank_table(q) entrywise)
- Essential sets, nests of sets and decreasing completions
- Pattern containment and the 3120/2301 smoothness test

Conventions:
    Everything is 0-indexed and codimension-indexed. Composition is
    (p o q)(i) = p(q(i)), so p.compose(s_i) swaps positions i and i+1 of
    the one-line word of p.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

logger = logging.getLogger(__name__)


class InvalidPermutationError(ValueError):
    """Raised when a word is not a bijection of [d]."""
    pass


class InvalidNestError(ValueError):
    """Raised when a chain of sets does not form a valid nest."""
    pass


class InvalidRankTableError(ValueError):
    """Raised when a table is not the rank table of any permutation."""
    pass


class DegreeMismatchError(ValueError):
    """Raised when two permutations of different degree are combined."""
    pass


@dataclass(frozen=True)
class Perm:
    """
    A permutation of [d] in one-line notation.

    Attributes:
        word: The values p(0), ..., p(d-1)
    """
    word: Tuple[int, ...]

    def __post_init__(self):
        word = tuple(int(x) for x in self.word)
        object.__setattr__(self, "word", word)
        if not word:
            raise InvalidPermutationError("Permutation must have degree >= 1")
        if sorted(word) != list(range(len(word))):
            raise InvalidPermutationError(
                f"Not a permutation of [0, {len(word)}): {word}"
            )

    @property
    def d(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.word)

    @classmethod
    def identity(cls, d: int) -> "Perm":
        return cls(tuple(range(d)))

    def inverse(self) -> "Perm":
        inv = [0] * self.d
        for i, value in enumerate(self.word):
            inv[value] = i
        return Perm(tuple(inv))

    def compose(self, other: "Perm") -> "Perm":
        """Return self o other, i.e. i -> self(other(i))."""
        check_degrees(self, other)
        return Perm(tuple(self.word[j] for j in other.word))


@dataclass(frozen=True)
class RankTable:
    """
    A (d+1) x (d+1) table of ranks, entry (a, b) = r(a, b).

    Row d and column d are stored explicitly and are zero.
    """
    d: int
    values: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        values = tuple(tuple(int(x) for x in row) for row in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.d + 1 or any(len(row) != self.d + 1 for row in values):
            raise InvalidRankTableError(
                f"Rank table for d={self.d} must be {self.d + 1}x{self.d + 1}"
            )

    def __call__(self, a: int, b: int) -> int:
        if a >= self.d or b >= self.d:
            return 0
        return self.values[a][b]


@dataclass(frozen=True)
class NestOfSets:
    """
    A chain [d] = A^{i_0} > A^{i_1} > ... > A^{i_s} = {} with |A^{i_j}| = d - i_j.

    Attributes:
        d: Size of the ground set
        coranks: Strictly increasing 0 = i_0 < ... < i_s = d
        sets: The chain, largest first
    """
    d: int
    coranks: Tuple[int, ...]
    sets: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        coranks = tuple(self.coranks)
        sets = tuple(frozenset(s) for s in self.sets)
        object.__setattr__(self, "coranks", coranks)
        object.__setattr__(self, "sets", sets)

        validate_coranks(self.d, coranks)
        if len(sets) != len(coranks):
            raise InvalidNestError(
                f"Nest has {len(sets)} sets but {len(coranks)} coranks"
            )
        if sets[0] != frozenset(range(self.d)):
            raise InvalidNestError(f"First set must be [{self.d}], got {sorted(sets[0])}")
        for corank, subset in zip(coranks, sets):
            if len(subset) != self.d - corank:
                raise InvalidNestError(
                    f"Set {sorted(subset)} has size {len(subset)}, "
                    f"expected {self.d - corank} for corank {corank}"
                )
        for bigger, smaller in zip(sets, sets[1:]):
            if not smaller < bigger:
                raise InvalidNestError(
                    f"Set {sorted(smaller)} is not strictly contained in {sorted(bigger)}"
                )

    @classmethod
    def from_sets(cls, sets: Sequence[Sequence[int]]) -> "NestOfSets":
        """Build a nest from its sets, inferring d and coranks from the sizes."""
        frozen = [frozenset(s) for s in sets]
        if not frozen:
            raise InvalidNestError("Nest must contain at least one set")
        d = len(frozen[0])
        return cls(d, tuple(d - len(s) for s in frozen), tuple(frozen))

    def restrict(self, coranks: Sequence[int]) -> "NestOfSets":
        """Keep only the sets at the given coranks (which must be a sub-chain)."""
        coranks = tuple(coranks)
        missing = set(coranks) - set(self.coranks)
        if missing:
            raise InvalidNestError(f"Coranks {sorted(missing)} are not in {self.coranks}")
        by_corank = dict(zip(self.coranks, self.sets))
        return NestOfSets(self.d, coranks, tuple(by_corank[c] for c in coranks))


def check_degrees(p: Perm, q: Perm) -> None:
    if p.d != q.d:
        raise DegreeMismatchError(f"Degree mismatch: {p.d} vs {q.d}")


def validate_coranks(d: int, coranks: Sequence[int]) -> None:
    """
    Check that coranks are 0 = i_0 < ... < i_s = d.

    Raises:
        InvalidNestError: If the sequence is not a valid corank list
    """
    coranks = list(coranks)
    if not coranks or coranks[0] != 0 or coranks[-1] != d:
        raise InvalidNestError(f"Coranks must start at 0 and end at {d}: {coranks}")
    if any(a >= b for a, b in zip(coranks, coranks[1:])):
        raise InvalidNestError(f"Coranks must be strictly increasing: {coranks}")


def complete_coranks(d: int) -> Tuple[int, ...]:
    return tuple(range(d + 1))


def all_perms(d: int) -> List[Perm]:
    """All of S_d in lexicographic order of one-line words."""
    return [Perm(w) for w in itertools.permutations(range(d))]


def simple_transposition(d: int, i: int) -> Perm:
    """The transposition swapping i and i+1."""
    if not 0 <= i < d - 1:
        raise InvalidPermutationError(f"Simple transposition index {i} out of range for d={d}")
    word = list(range(d))
    word[i], word[i + 1] = word[i + 1], word[i]
    return Perm(tuple(word))


@lru_cache(maxsize=4096)
def inversions(p: Perm) -> int:
    """Number of pairs i < j with p(i) > p(j)."""
    w = p.word
    return sum(1 for i, j in itertools.combinations(range(p.d), 2) if w[i] > w[j])


def descending(d: int) -> Perm:
    """The longest element omega(i) = d - 1 - i."""
    return Perm(tuple(d - 1 - i for i in range(d)))


def coinversions(p: Perm) -> int:
    """inv(omega o p), which equals C(d, 2) - inv(p)."""
    return inversions(descending(p.d).compose(p))


@lru_cache(maxsize=4096)
def rank_table(p: Perm) -> RankTable:
    """Rank table of p: entry (a, b) counts a' >= a with p(a') >= b."""
    d = p.d
    values = [[0] * (d + 1) for _ in range(d + 1)]
    for a in range(d - 1, -1, -1):
        for b in range(d):
            values[a][b] = values[a + 1][b] + (1 if p(a) >= b else 0)
    return RankTable(d, tuple(tuple(row) for row in values))


def perm_from_rank_table(t: RankTable) -> Perm:
    """
    Recover the permutation whose rank table is t.

    Reads p(a) = b off the double difference
    r(a,b) - r(a+1,b) - r(a,b+1) + r(a+1,b+1), which must be 0 or 1 with
    exactly one 1 in every row and column.

    Raises:
        InvalidRankTableError: If t is not a rank table
    """
    d = t.d
    if t.values[0][0] != d:
        raise InvalidRankTableError(f"r(0,0) must be {d}, got {t.values[0][0]}")
    if any(t.values[d][b] or t.values[b][d] for b in range(d + 1)):
        raise InvalidRankTableError("Row d and column d of a rank table must be zero")

    word = [-1] * d
    columns_hit = [0] * d
    for a in range(d):
        for b in range(d):
            dd = t(a, b) - t(a + 1, b) - t(a, b + 1) + t(a + 1, b + 1)
            if dd not in (0, 1):
                raise InvalidRankTableError(
                    f"Double difference at ({a},{b}) is {dd}, expected 0 or 1"
                )
            if dd == 1:
                if word[a] != -1:
                    raise InvalidRankTableError(f"Row {a} has more than one entry")
                word[a] = b
                columns_hit[b] += 1

    if -1 in word or any(c != 1 for c in columns_hit):
        raise InvalidRankTableError("Double differences do not form a permutation matrix")
    return Perm(tuple(word))


@lru_cache(maxsize=65536)
def bruhat_leq(p: Perm, q: Perm) -> bool:
    """True iff p <= q, i.e. rank_table(p) >= rank_table(q) entrywise."""
    check_degrees(p, q)
    tp, tq = rank_table(p).values, rank_table(q).values
    return all(x >= y for row_p, row_q in zip(tp, tq) for x, y in zip(row_p, row_q))


def bruhat_interval_below(p: Perm) -> List[Perm]:
    """All q <= p, in lexicographic order."""
    return [q for q in all_perms(p.d) if bruhat_leq(q, p)]


@lru_cache(maxsize=4096)
def essential_set(p: Perm) -> FrozenSet[Tuple[int, int]]:
    """
    Ess(p): pairs (a, b), 1 <= a, b < d, with p(a-1) < b <= p(a)
    and p^-1(b-1) < a <= p^-1(b).
    """
    inv = p.inverse()
    ess = set()
    for a in range(1, p.d):
        for b in range(1, p.d):
            if p(a - 1) < b <= p(a) and inv(b - 1) < a <= inv(b):
                ess.add((a, b))
    return frozenset(ess)


def decreasing_completion(n: NestOfSets) -> Perm:
    """Concatenate each difference A^{i_j} minus A^{i_{j+1}} in decreasing order."""
    word: List[int] = []
    for bigger, smaller in zip(n.sets, n.sets[1:]):
        word.extend(sorted(bigger - smaller, reverse=True))
    return Perm(tuple(word))


def nest_of_perm(p: Perm) -> NestOfSets:
    """The complete nest A^k = {p(k), ..., p(d-1)}."""
    sets = tuple(frozenset(p.word[k:]) for k in range(p.d + 1))
    return NestOfSets(p.d, complete_coranks(p.d), sets)


def _pattern_key(values: Sequence[int]) -> Tuple[int, ...]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0] * len(values)
    for rank, i in enumerate(order):
        ranks[i] = rank
    return tuple(ranks)


def contains_pattern(p: Perm, pattern: Perm) -> bool:
    """True iff some subsequence of p is order-isomorphic to pattern."""
    if pattern.d > p.d:
        return False
    target = pattern.word
    for positions in itertools.combinations(range(p.d), pattern.d):
        if _pattern_key([p.word[i] for i in positions]) == target:
            return True
    return False


SMOOTHNESS_PATTERNS = (Perm((3, 1, 2, 0)), Perm((2, 3, 0, 1)))


def ls_smooth(p: Perm) -> bool:
    """True iff p avoids both 3120 and 2301."""
    return not any(contains_pattern(p, pattern) for pattern in SMOOTHNESS_PATTERNS)


def ess_rows_compatible(p: Perm, coranks: Sequence[int]) -> bool:
    """
    True iff p decreases on every block [i_j, i_{j+1}) of the coranks.

    Essential rows sit at ascents p(a-1) < p(a), so such a p has its
    essential set in the rows {i_0, ..., i_s} and defines a rank condition
    against a partial flag with these coranks. Every decreasing completion
    of a nest with these coranks qualifies.
    """
    validate_coranks(p.d, coranks)
    for start, stop in zip(coranks, coranks[1:]):
        block = p.word[start:stop]
        if any(x < y for x, y in zip(block, block[1:])):
            return False
    return True

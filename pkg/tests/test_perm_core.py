"""
Unit tests for permutation combinatorics.
"""

import itertools

import pytest
from hypothesis import given, strategies as st

from richkit.perm_core import (
    DegreeMismatchError,
    InvalidNestError,
    InvalidPermutationError,
    InvalidRankTableError,
    NestOfSets,
    Perm,
    RankTable,
    all_perms,
    bruhat_interval_below,
    bruhat_leq,
    coinversions,
    contains_pattern,
    decreasing_completion,
    descending,
    essential_set,
    ess_rows_compatible,
    inversions,
    ls_smooth,
    nest_of_perm,
    perm_from_rank_table,
    rank_table,
    simple_transposition,
)

perms = st.integers(min_value=1, max_value=5).flatmap(
    lambda d: st.permutations(list(range(d))).map(lambda w: Perm(tuple(w)))
)
perm_pairs = st.integers(min_value=1, max_value=4).flatmap(
    lambda d: st.tuples(
        st.permutations(list(range(d))).map(lambda w: Perm(tuple(w))),
        st.permutations(list(range(d))).map(lambda w: Perm(tuple(w))),
    )
)


def descent_word(p: Perm) -> list:
    """A reduced word built by peeling off right descents: p = (p o s_i) o s_i."""
    for i in range(p.d - 1):
        if p(i) > p(i + 1):
            return descent_word(p.compose(simple_transposition(p.d, i))) + [i]
    return []


def word_product(d: int, word) -> Perm:
    product = Perm.identity(d)
    for i in word:
        product = product.compose(simple_transposition(d, i))
    return product


class TestPerm:
    """Tests for the Perm value type."""

    def test_rejects_non_bijection(self):
        """Repeated values are rejected."""
        with pytest.raises(InvalidPermutationError) as exc_info:
            Perm((0, 0, 1))
        assert "Not a permutation" in str(exc_info.value)

    def test_rejects_empty(self):
        """Degree zero is rejected."""
        with pytest.raises(InvalidPermutationError):
            Perm(())

    def test_text_form(self):
        """str gives comma-separated one-line notation."""
        assert str(Perm((4, 2, 3, 1, 0))) == "4,2,3,1,0"

    def test_compose_convention(self):
        """(p o q)(i) = p(q(i)); composing with s_i swaps positions i, i+1."""
        p = Perm((2, 0, 1))
        assert p.compose(simple_transposition(3, 0)) == Perm((0, 2, 1))
        assert Perm((1, 2, 0)).compose(Perm((2, 0, 1))) == Perm((0, 1, 2))

    def test_inverse(self):
        """p o p^-1 is the identity."""
        p = Perm((3, 1, 4, 2, 0))
        assert p.compose(p.inverse()) == Perm.identity(5)
        assert p.inverse() == Perm((4, 1, 3, 0, 2))

    def test_compose_degree_mismatch(self):
        """Composing permutations of different degrees fails."""
        with pytest.raises(DegreeMismatchError):
            Perm((0, 1)).compose(Perm((0, 1, 2)))

    def test_all_perms_lexicographic(self):
        """S_3 comes out in lexicographic order."""
        assert [str(p) for p in all_perms(3)] == ["0,1,2", "0,2,1", "1,0,2", "1,2,0", "2,0,1", "2,1,0"]


class TestInversions:
    """Tests for inversion and coinversion counts."""

    def test_longest_element(self):
        """The descending permutation has C(d, 2) inversions."""
        assert inversions(descending(5)) == 10
        assert coinversions(descending(5)) == 0

    def test_identity(self):
        """The identity has no inversions."""
        assert inversions(Perm.identity(4)) == 0
        assert coinversions(Perm.identity(4)) == 6

    def test_worked_permutation(self):
        """3,1,4,2,0 has 7 inversions and 3 coinversions."""
        p = Perm((3, 1, 4, 2, 0))
        assert inversions(p) == 7
        assert coinversions(p) == 3

    def test_simple_transposition_range(self):
        """Out-of-range simple transpositions are rejected."""
        with pytest.raises(InvalidPermutationError):
            simple_transposition(3, 2)


class TestRankTable:
    """Tests for rank tables and their inversion."""

    def test_values(self):
        """Rank table of 2,0,1 including the zero boundary."""
        table = rank_table(Perm((2, 0, 1)))
        assert table.values == (
            (3, 2, 1, 0),
            (2, 1, 0, 0),
            (1, 1, 0, 0),
            (0, 0, 0, 0),
        )

    def test_outside_is_zero(self):
        """Entries beyond the table read as zero."""
        table = rank_table(Perm((1, 0)))
        assert table(2, 0) == 0
        assert table(0, 5) == 0

    def test_roundtrip_s4(self):
        """perm_from_rank_table inverts rank_table on S_4."""
        for p in all_perms(4):
            assert perm_from_rank_table(rank_table(p)) == p

    def test_bad_corner(self):
        """r(0, 0) must equal d."""
        bad = RankTable(2, ((1, 0, 0), (0, 0, 0), (0, 0, 0)))
        with pytest.raises(InvalidRankTableError) as exc_info:
            perm_from_rank_table(bad)
        assert "r(0,0)" in str(exc_info.value)

    def test_bad_shape(self):
        """Tables must be (d+1) x (d+1)."""
        with pytest.raises(InvalidRankTableError):
            RankTable(2, ((2, 1),))


class TestBruhat:
    """Tests for the Bruhat order."""

    def test_identity_is_minimum(self):
        """The identity lies below everything."""
        for p in all_perms(3):
            assert bruhat_leq(Perm.identity(3), p)
            assert bruhat_leq(p, descending(3))

    def test_incomparable(self):
        """The two simple transpositions of S_3 are incomparable."""
        a, b = Perm((1, 0, 2)), Perm((0, 2, 1))
        assert not bruhat_leq(a, b)
        assert not bruhat_leq(b, a)

    def test_chain(self):
        """1,0,2 <= 2,0,1."""
        assert bruhat_leq(Perm((1, 0, 2)), Perm((2, 0, 1)))
        assert not bruhat_leq(Perm((2, 0, 1)), Perm((1, 0, 2)))

    def test_interval_below(self):
        """The interval below 1,0,2 is {id, 1,0,2}."""
        assert bruhat_interval_below(Perm((1, 0, 2))) == [Perm((0, 1, 2)), Perm((1, 0, 2))]

    def test_caches_bounded(self):
        """Memoized permutation functions have a size limit."""
        for cached in (bruhat_leq, inversions, rank_table, essential_set):
            assert cached.cache_info().maxsize is not None

    def test_transitive_s4(self):
        """p <= q <= r implies p <= r, for all triples in S_4."""
        group = all_perms(4)
        above = {p: [q for q in group if bruhat_leq(p, q)] for p in group}
        for p in group:
            for q in above[p]:
                assert all(bruhat_leq(p, r) for r in above[q])

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_subword_oracle(self, d):
        """p <= q iff p is a product of a subword of a reduced word of q."""
        for q in all_perms(d):
            word = descent_word(q)
            assert len(word) == inversions(q)
            assert word_product(d, word) == q
            below = {
                word_product(d, [word[k] for k in range(len(word)) if mask >> k & 1])
                for mask in range(1 << len(word))
            }
            for p in all_perms(d):
                assert bruhat_leq(p, q) == (p in below)

    def test_degree_mismatch(self):
        """Comparing different degrees fails."""
        with pytest.raises(DegreeMismatchError):
            bruhat_leq(Perm((0,)), Perm((0, 1)))


class TestEssentialSet:
    """Tests for essential sets."""

    def test_identity(self):
        """Ess(id) is the diagonal (a, a), 1 <= a < d."""
        assert essential_set(Perm.identity(3)) == frozenset({(1, 1), (2, 2)})

    def test_longest_is_empty(self):
        """The longest element imposes no conditions."""
        assert essential_set(descending(4)) == frozenset()

    def test_worked_permutation(self):
        """Ess(3,1,4,2,0) = {(2,2), (2,4)}."""
        assert essential_set(Perm((3, 1, 4, 2, 0))) == frozenset({(2, 2), (2, 4)})

    def test_pattern_2301(self):
        """Ess(2,3,0,1) = {(1,3), (3,1)}."""
        assert essential_set(Perm((2, 3, 0, 1))) == frozenset({(1, 3), (3, 1)})


class TestNests:
    """Tests for nests of sets and decreasing completions."""

    def test_decreasing_completion(self):
        """{0..4} > {0,1,3} > {} completes to 4,2,3,1,0."""
        nest = NestOfSets.from_sets([range(5), {0, 1, 3}, ()])
        assert nest.coranks == (0, 2, 5)
        assert decreasing_completion(nest) == Perm((4, 2, 3, 1, 0))

    def test_restrict(self):
        """Restricting a complete nest keeps the chosen sets."""
        nest = nest_of_perm(Perm((3, 1, 4, 2, 0))).restrict((0, 2, 5))
        assert nest.sets[1] == frozenset({0, 2, 4})
        assert decreasing_completion(nest) == Perm((3, 1, 4, 2, 0))

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_complete_nest_roundtrip(self, d):
        """Every complete nest is the nest of its decreasing completion."""
        for order in itertools.permutations(range(d)):
            nest = NestOfSets.from_sets([order[k:] for k in range(d + 1)])
            assert nest_of_perm(decreasing_completion(nest)) == nest

    def test_not_nested(self):
        """Sets must be strictly decreasing."""
        with pytest.raises(InvalidNestError) as exc_info:
            NestOfSets.from_sets([[0, 1, 2], [0, 4], []])
        assert "not strictly contained" in str(exc_info.value)

    def test_must_end_empty(self):
        """The last corank must be d."""
        with pytest.raises(InvalidNestError):
            NestOfSets.from_sets([[0, 1, 2], [0, 1]])

    def test_restrict_unknown_corank(self):
        """Restricting to a corank the nest lacks fails."""
        nest = NestOfSets.from_sets([range(3), ()])
        with pytest.raises(InvalidNestError):
            nest.restrict((0, 1, 3))


class TestPatterns:
    """Tests for pattern containment and the smoothness test."""

    def test_contains_itself(self):
        """Every permutation contains itself."""
        assert contains_pattern(Perm((3, 1, 2, 0)), Perm((3, 1, 2, 0)))

    def test_longer_pattern(self):
        """A pattern longer than the permutation is never contained."""
        assert not contains_pattern(Perm((1, 0)), Perm((2, 1, 0)))

    def test_smoothness(self):
        """3120 and 2301 are the singular patterns."""
        assert not ls_smooth(Perm((3, 1, 2, 0)))
        assert not ls_smooth(Perm((2, 3, 0, 1)))
        assert ls_smooth(Perm((0, 3, 2, 1)))
        assert not ls_smooth(Perm((4, 2, 3, 1, 0)))

    def test_s3_all_smooth(self):
        """No permutation of degree 3 is singular."""
        assert all(ls_smooth(p) for p in all_perms(3))


class TestEssRowsCompatible:
    """Tests for the partial-flag compatibility condition."""

    def test_block_decreasing(self):
        """3,1,4,2,0 decreases on the blocks of (0, 2, 5)."""
        assert ess_rows_compatible(Perm((3, 1, 4, 2, 0)), (0, 2, 5))

    def test_longest_always_compatible(self):
        """The longest element decreases everywhere."""
        assert ess_rows_compatible(descending(5), (0, 5))

    def test_increasing_block(self):
        """The identity is not compatible with a block of size 3."""
        assert not ess_rows_compatible(Perm.identity(3), (0, 3))

    def test_complete_coranks(self):
        """Every permutation is compatible with complete coranks."""
        assert all(ess_rows_compatible(p, (0, 1, 2, 3)) for p in all_perms(3))


class TestProperties:
    """Randomized invariants."""

    @given(perms)
    def test_nest_roundtrip(self, p):
        """decreasing_completion o nest_of_perm is the identity."""
        assert decreasing_completion(nest_of_perm(p)) == p

    @given(perms)
    def test_inversions_of_inverse(self, p):
        """inv(p) = inv(p^-1) and inv + coinv = C(d, 2)."""
        assert inversions(p) == inversions(p.inverse())
        assert inversions(p) + coinversions(p) == p.d * (p.d - 1) // 2

    @given(perm_pairs)
    def test_bruhat_inverse_invariant(self, pair):
        """p <= q iff p^-1 <= q^-1."""
        p, q = pair
        assert bruhat_leq(p, q) == bruhat_leq(p.inverse(), q.inverse())

    @given(perm_pairs)
    def test_bruhat_antisymmetric(self, pair):
        """p <= q and q <= p only when p = q."""
        p, q = pair
        if bruhat_leq(p, q) and bruhat_leq(q, p):
            assert p == q

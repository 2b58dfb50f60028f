"""
Unit tests for the Demazure product.
"""

import itertools
from functools import reduce

import pytest
from hypothesis import given, settings, strategies as st

from richkit import demazure
from richkit.demazure import reduced_word, star, star_simple, star_via_rank_formula
from richkit.perm_core import (
    DegreeMismatchError,
    Perm,
    all_perms,
    bruhat_leq,
    descending,
    inversions,
    simple_transposition,
)

perm_pairs = st.integers(min_value=1, max_value=4).flatmap(
    lambda d: st.tuples(
        st.permutations(list(range(d))).map(lambda w: Perm(tuple(w))),
        st.permutations(list(range(d))).map(lambda w: Perm(tuple(w))),
    )
)
s5 = st.permutations(list(range(5))).map(lambda w: Perm(tuple(w)))


class TestReducedWord:
    """Tests for reduced word factorization."""

    def test_example(self):
        """2,0,1 = s_1 o s_0."""
        assert reduced_word(Perm((2, 0, 1))) == [1, 0]

    def test_identity(self):
        """The identity has the empty word."""
        assert reduced_word(Perm.identity(4)) == []

    @pytest.mark.parametrize("strategy", ["bubble", "descent"])
    def test_words_multiply_back(self, strategy):
        """Composing the simple transpositions of the word gives p, with inv(p) letters."""
        for p in all_perms(4):
            word = reduced_word(p, strategy)
            assert len(word) == inversions(p)
            product = reduce(lambda acc, j: acc.compose(simple_transposition(4, j)), word, Perm.identity(4))
            assert product == p

    def test_unknown_strategy(self):
        """Unknown strategies are rejected."""
        with pytest.raises(ValueError) as exc_info:
            reduced_word(Perm((1, 0)), "random")
        assert "Unknown reduced word strategy" in str(exc_info.value)


class TestStar:
    """Tests for star_simple and star."""

    def test_example(self):
        """0,2,1 * 1,0,2 = 2,0,1."""
        assert star(Perm((0, 2, 1)), Perm((1, 0, 2))) == Perm((2, 0, 1))

    def test_simple_idempotent(self):
        """s * s = s."""
        s = simple_transposition(3, 1)
        assert star(s, s) == s

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_right_factor_absorbed(self, d):
        """(t * s) * s = t * s for every t and every simple s."""
        for i in range(d - 1):
            s = simple_transposition(d, i)
            for t in all_perms(d):
                once = star(t, s)
                assert star(once, s) == once

    def test_star_simple_absorbs_descent(self):
        """t * s_i = t when t o s_i is shorter."""
        t = Perm((1, 0, 2))
        assert star_simple(t, 0) == t

    def test_star_simple_range(self):
        """The index must be in [0, d-1)."""
        with pytest.raises(ValueError):
            star_simple(Perm((1, 0, 2)), 2)

    def test_identity_is_unit(self):
        """id * p = p * id = p."""
        for p in all_perms(3):
            assert star(Perm.identity(3), p) == p
            assert star(p, Perm.identity(3)) == p

    def test_longest_absorbs(self):
        """omega * p = omega."""
        for p in all_perms(3):
            assert star(descending(3), p) == descending(3)

    def test_cache_bounded(self):
        """The product cache has a size limit."""
        assert demazure._star_cached.cache_info().maxsize is not None

    def test_degree_mismatch(self):
        """Different degrees are rejected."""
        with pytest.raises(DegreeMismatchError):
            star(Perm((0, 1)), Perm((0, 1, 2)))

    def test_associative_s3(self):
        """Associativity over all 216 triples of S_3."""
        for a, b, c in itertools.product(all_perms(3), repeat=3):
            assert star(star(a, b), c) == star(a, star(b, c))


class TestRankFormula:
    """Tests for the rank-table construction of the Demazure product."""

    def test_example(self):
        """The rank formula gives 2,0,1 for 0,2,1 * 1,0,2."""
        assert star_via_rank_formula(Perm((0, 2, 1)), Perm((1, 0, 2))) == Perm((2, 0, 1))

    def test_agrees_on_s4(self):
        """The recursion and the rank formula agree on all of S_4 x S_4."""
        for t, p in itertools.product(all_perms(4), repeat=2):
            assert star(t, p) == star_via_rank_formula(t, p)


class TestProperties:
    """Randomized invariants of the Demazure product."""

    @given(perm_pairs)
    def test_inverse_identity(self, pair):
        """(t * p)^-1 = p^-1 * t^-1."""
        t, p = pair
        assert star(t, p).inverse() == star(p.inverse(), t.inverse())

    @given(perm_pairs)
    def test_upper_bound(self, pair):
        """t * p lies above t, p and t o p."""
        t, p = pair
        product = star(t, p)
        assert bruhat_leq(t, product)
        assert bruhat_leq(p, product)
        assert bruhat_leq(t.compose(p), product)

    @given(perm_pairs)
    def test_length_bound(self, pair):
        """inv(t * p) <= inv(t) + inv(p)."""
        t, p = pair
        assert inversions(star(t, p)) <= inversions(t) + inversions(p)

    @given(perm_pairs)
    def test_word_strategy_irrelevant(self, pair):
        """Both reduced word strategies give the same product."""
        t, p = pair
        assert star(t, p, "bubble") == star(t, p, "descent")

    @settings(max_examples=300)
    @given(s5, s5, s5)
    def test_associative_s5(self, a, b, c):
        """Associativity on random triples of S_5."""
        assert star(star(a, b), c) == star(a, star(b, c))

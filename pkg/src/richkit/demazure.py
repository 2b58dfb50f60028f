"""
Demazure product on S_d.

star(t, p) folds the simple-transposition rule over a reduced word of p;
star_via_rank_formula builds the rank table of t * p directly from the rank
tables of t and p. The two are independent and are cross-checked by the
demazure-axioms suite.
"""

import logging
from functools import lru_cache
from typing import List, Literal

from .perm_core import (
    Perm,
    RankTable,
    check_degrees,
    inversions,
    perm_from_rank_table,
    rank_table,
    simple_transposition,
)

logger = logging.getLogger(__name__)

# Strategy for producing a reduced word
WordStrategy = Literal["bubble", "descent"]


def reduced_word(p: Perm, strategy: WordStrategy = "bubble") -> List[int]:
    """
    Return indices [j1, ..., jk] with p = s_j1 o s_j2 o ... o s_jk and k = inv(p).

    Both strategies sort the one-line word by adjacent swaps that each remove
    one inversion: "bubble" sweeps left to right, "descent" always swaps the
    rightmost descent. Sorting gives p o s_a1 o ... o s_ak = id, so the word
    is the list of swaps reversed.

    Args:
        p: The permutation to factor
        strategy: "bubble" or "descent"

    Returns:
        List of simple transposition indices
    """
    word = list(p.word)
    swaps: List[int] = []

    if strategy == "bubble":
        changed = True
        while changed:
            changed = False
            for i in range(len(word) - 1):
                if word[i] > word[i + 1]:
                    word[i], word[i + 1] = word[i + 1], word[i]
                    swaps.append(i)
                    changed = True
    elif strategy == "descent":
        while True:
            descents = [i for i in range(len(word) - 1) if word[i] > word[i + 1]]
            if not descents:
                break
            i = descents[-1]
            word[i], word[i + 1] = word[i + 1], word[i]
            swaps.append(i)
    else:
        raise ValueError(f"Unknown reduced word strategy: {strategy}")

    return list(reversed(swaps))


def star_simple(t: Perm, s: int) -> Perm:
    """
    t * s_s: t itself if inv(t o s_s) < inv(t), else t o s_s.

    Raises:
        ValueError: If s is not in [0, d-1)
    """
    if not 0 <= s < t.d - 1:
        raise ValueError(f"Simple transposition index {s} out of range for d={t.d}")
    ts = t.compose(simple_transposition(t.d, s))
    return t if inversions(ts) < inversions(t) else ts


@lru_cache(maxsize=65536)
def _star_cached(t: Perm, p: Perm, strategy: str) -> Perm:
    result = t
    for s in reduced_word(p, strategy):
        result = star_simple(result, s)
    return result


def star(t: Perm, p: Perm, strategy: WordStrategy = "bubble") -> Perm:
    """
    Demazure product t * p.

    Raises:
        DegreeMismatchError: If t and p have different degrees
    """
    check_degrees(t, p)
    return _star_cached(t, p, strategy)


def star_via_rank_formula(t: Perm, p: Perm) -> Perm:
    """
    Demazure product from rank tables:
    r(a, b) = max over 0 <= k <= d of r_p(a, k) + r_t(k, b) - (d - k), clamped at 0.

    Raises:
        DegreeMismatchError: If t and p have different degrees
        InvalidRankTableError: If the assembled table is not a rank table
    """
    check_degrees(t, p)
    d = t.d
    rp, rt = rank_table(p), rank_table(t)
    values = [[0] * (d + 1) for _ in range(d + 1)]
    for a in range(d):
        for b in range(d):
            best = max(rp(a, k) + rt(k, b) - (d - k) for k in range(d + 1))
            values[a][b] = max(best, 0)
    return perm_from_rank_table(RankTable(d, tuple(tuple(row) for row in values)))

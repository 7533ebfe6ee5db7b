"""Reduced words in a free group on an ordered basis x_1, ..., x_n.

A word is a tuple of nonzero ints (Tietze notation): ``3`` is x_3 and ``-3`` is
x_3^{-1}. Every function here returns reduced words, so equality of group
elements is plain tuple equality. The ambient rank is passed where it matters
rather than stored on the word.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .kernels import invert_word, reduce_word

FreeWord = tuple[int, ...]

EMPTY: FreeWord = ()

# Enumeration suites work over this many basis letters.
POOL_SIZE = 8


def check_rank(w: Iterable[int], rank: int) -> None:
    for x in w:
        if x == 0 or abs(x) > rank:
            raise ValueError(f"letter {x} is outside the basis x_1..x_{rank}")


def reduce(raw: Iterable[int]) -> FreeWord:
    return reduce_word(tuple(raw))


def word(*letters: int) -> FreeWord:
    return reduce_word(letters)


def multiply(*words: Sequence[int], rank: int | None = None) -> FreeWord:
    """Reduced product of the given words, left to right."""
    if rank is not None:
        for w in words:
            check_rank(w, rank)
    out: list[int] = []
    for w in words:
        out.extend(w)
    return reduce_word(out)


def invert(u: Sequence[int]) -> FreeWord:
    return invert_word(tuple(u))


def commutator(a: Sequence[int], b: Sequence[int]) -> FreeWord:
    """[a, b] = a b a^{-1} b^{-1}."""
    a, b = tuple(a), tuple(b)
    return reduce_word(a + b + invert_word(a) + invert_word(b))


def power(u: Sequence[int], k: int) -> FreeWord:
    base = tuple(u) if k >= 0 else invert_word(tuple(u))
    return reduce_word(base * abs(k))


def exponent_sums(w: Iterable[int], rank: int) -> list[int]:
    sums = [0] * rank
    for x in w:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return sums


def rank_of(w: Iterable[int]) -> int:
    return max((abs(x) for x in w), default=0)


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return " ".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in w)

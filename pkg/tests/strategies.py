"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from h2ia.ia_alphabet import all_aut_generators, all_ia_generators

RANK = 5

_IA = all_ia_generators(RANK)
_AUT = all_aut_generators(RANK)


def letters(rank=RANK):
    return st.integers(1, rank).flatmap(lambda i: st.sampled_from((i, -i)))


def free_words(rank=RANK, max_size=24):
    return st.lists(letters(rank), max_size=max_size).map(tuple)


def ia_gens():
    return st.sampled_from(_IA)


def ia_words(max_size=8):
    return st.lists(ia_gens(), max_size=max_size).map(tuple)


def aut_gens():
    return st.sampled_from(_AUT)


def aut_words(max_size=4):
    return st.lists(aut_gens(), min_size=1, max_size=max_size).map(tuple)

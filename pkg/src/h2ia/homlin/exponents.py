"""Exponent sums of IA words over canonically oriented generators."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable

from ..ia_alphabet import Conj, CommTv, Gen

ExpVector = dict[Gen, int]


def canonical_generator(g: Gen) -> tuple[Gen, int]:
    """The positively oriented generator underlying ``g`` and the exponent it contributes.

    A conjugation move C(a, b) with b < 0 is the inverse of C(a, |b|). A commutator
    transvection is positive when its middle index is below its last index;
    the other orientation is the inverse of the positive one.
    """
    kind = g[0]
    if kind == "C":
        return (g, 1) if g[2] > 0 else (Conj(g[1], -g[2]), -1)
    if kind == "Mc":
        a, b, c = g[1], g[2], g[3]
        return (g, 1) if abs(b) < abs(c) else (CommTv(a, c, b), -1)
    raise ValueError(f"{g!r} is not an IA generator")


def exp_vector(w: Iterable[Gen]) -> ExpVector:
    counts: Counter = Counter()
    for g in w:
        key, e = canonical_generator(g)
        counts[key] += e
    return {k: v for k, v in counts.items() if v}


def is_commutator_class(w: Iterable[Gen]) -> bool:
    """A relator lies in the commutator subgroup iff every exponent sum vanishes."""
    return not exp_vector(w)

"""Symbolic generators of IA_n and Aut(F_n), words over them, and evaluation.

Generators are small tagged tuples, so they hash and compare cheaply and two
generators of different kinds never compare equal. Inverses are expressed by
flipping parameters rather than by a separate flag:

* ``Conj(a, b)`` is x_a ↦ x_b x_a x_b^{-1}; ``Conj(a, -b)`` is its inverse.
* ``CommTv(a, b, c)`` is x_a ↦ [x_b, x_c] x_a (signed slots give x^{±1}; a
  negative first slot multiplies on the right by the inverse commutator).
  Its inverse is ``CommTv(a, c, b)``.
* ``Transv(a, b)`` is x_a ↦ x_b^{±1} x_a, the exponent being the sign of ``b``;
  a negative first slot multiplies on the right instead. Inverse flips ``b``.
* ``Swap(a, b)`` exchanges two basis letters and ``Inv(a)`` inverts one; both
  are involutions.

A word g1 g2 ... gk evaluates to the composite g1 ∘ g2 ∘ ... ∘ gk.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import lru_cache
from itertools import permutations

from .endomorphisms import Endo
from .kernels import compose_chain, invert_word


def _sign(x: int) -> int:
    return 1 if x > 0 else -1


class Gen(tuple):
    """Base class; element 0 is the kind tag used in JSON."""

    __slots__ = ()
    kind = "?"

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(str, self[1:]))})"

    @property
    def params(self) -> tuple[int, ...]:
        return tuple(self[1:])

    def indices(self) -> set[int]:
        return {abs(x) for x in self[1:]}

    def to_json(self) -> dict:
        return dict(zip(("k", "a", "b", "c"), self))


class Conj(Gen):
    __slots__ = ()
    kind = "C"

    def __new__(cls, a: int, b: int):
        a = abs(a)
        if a == 0 or b == 0 or a == abs(b):
            raise ValueError(f"conjugation move needs two distinct indices, got ({a}, {b})")
        return tuple.__new__(cls, ("C", a, b))

    a = property(lambda self: self[1])
    b = property(lambda self: self[2])


class CommTv(Gen):
    __slots__ = ()
    kind = "Mc"

    def __new__(cls, a: int, b: int, c: int):
        if 0 in (a, b, c) or len({abs(a), abs(b), abs(c)}) != 3:
            raise ValueError(f"commutator transvection needs distinct indices, got ({a}, {b}, {c})")
        return tuple.__new__(cls, ("Mc", a, b, c))

    a = property(lambda self: self[1])
    b = property(lambda self: self[2])
    c = property(lambda self: self[3])


class Transv(Gen):
    __slots__ = ()
    kind = "M"

    def __new__(cls, a: int, b: int):
        if 0 in (a, b) or abs(a) == abs(b):
            raise ValueError(f"transvection needs distinct indices, got ({a}, {b})")
        return tuple.__new__(cls, ("M", a, b))

    a = property(lambda self: self[1])
    b = property(lambda self: self[2])


class Swap(Gen):
    __slots__ = ()
    kind = "P"

    def __new__(cls, a: int, b: int):
        a, b = abs(a), abs(b)
        if a == 0 or a == b:
            raise ValueError(f"swap needs distinct indices, got ({a}, {b})")
        return tuple.__new__(cls, ("P", a, b))

    a = property(lambda self: self[1])
    b = property(lambda self: self[2])


class Inv(Gen):
    __slots__ = ()
    kind = "I"

    def __new__(cls, a: int):
        if a == 0:
            raise ValueError("inversion needs a nonzero index")
        return tuple.__new__(cls, ("I", abs(a)))

    a = property(lambda self: self[1])


IAGen = Conj | CommTv
AutGen = Transv | Swap | Inv
IAWord = tuple[IAGen, ...]
AutWord = tuple[AutGen, ...]

_KINDS = {"C": Conj, "Mc": CommTv, "M": Transv, "P": Swap, "I": Inv}


@lru_cache(maxsize=None)
def inverse_gen(g: Gen) -> Gen:
    kind = g[0]
    if kind == "C":
        return Conj(g[1], -g[2])
    if kind == "Mc":
        return CommTv(g[1], g[3], g[2])
    if kind == "M":
        return Transv(g[1], -g[2])
    return g


ia_inverse_gen = inverse_gen


def pw(*words: Iterable[Gen]) -> tuple:
    """Freely reduced product of the given words."""
    out: list = []
    for w in words:
        for g in w:
            if out and out[-1] == inverse_gen(g):
                out.pop()
            else:
                out.append(g)
    return tuple(out)


def iw(w: Sequence[Gen]) -> tuple:
    return tuple(inverse_gen(g) for g in reversed(w))


def cyw(w: Sequence[Gen]) -> tuple:
    """Move the first letter to the end (no reduction)."""
    w = tuple(w)
    return w[1:] + w[:1] if w else w


def commutator(u: Sequence[Gen], v: Sequence[Gen]) -> tuple:
    return pw(u, v, iw(u), iw(v))


@lru_cache(maxsize=None)
def action(g: Gen) -> tuple:
    """Sparse basis action of a generator: pairs (index, image word)."""
    kind = g[0]
    if kind == "C":
        a, b = g[1], g[2]
        return ((a, (b, a, -b)),)
    if kind == "Mc":
        a, b, c = g[1], g[2], g[3]
        comm = (b, c, -b, -c)
        if a > 0:
            return ((a, comm + (a,)),)
        return ((-a, (-a,) + invert_word(comm)),)
    if kind == "M":
        a, b = g[1], g[2]
        if a > 0:
            return ((a, (b, a)),)
        return ((-a, (-a, -b)),)
    if kind == "P":
        return ((g[1], (g[2],)), (g[2], (g[1],)))
    return ((g[1], (-g[1],)),)


def max_index(w: Iterable[Gen]) -> int:
    return max((abs(x) for g in w for x in g[1:]), default=0)


def evaluate(w: Sequence[Gen], rank: int) -> Endo:
    w = tuple(w)
    if max_index(w) > rank:
        raise ValueError(f"word uses index {max_index(w)} beyond rank {rank}")
    base = tuple((i,) for i in range(1, rank + 1))
    return Endo(compose_chain(base, [action(g) for g in w]))


def eval_ia(w: Sequence[IAGen], rank: int) -> Endo:
    for g in w:
        if g[0] not in ("C", "Mc"):
            raise TypeError(f"{g!r} is not an IA generator")
    return evaluate(w, rank)


def eval_aut(w: Sequence[Gen], rank: int) -> Endo:
    return evaluate(w, rank)


def is_trivial(w: Sequence[Gen], rank: int) -> bool:
    """True when the word evaluates to the identity on every basis letter."""
    return all(img == (i,) for i, img in enumerate(evaluate(w, rank).images, start=1))


def conj_word(a: int, b: int, e: int = 1) -> tuple:
    """Conj(a, b) raised to the power e ∈ {±1} as a one-letter word."""
    return (Conj(a, b if e > 0 else -b),)


def all_ia_generators(rank: int) -> list[IAGen]:
    idx = range(1, rank + 1)
    out: list[IAGen] = [Conj(a, s * b) for a in idx for b in idx if a != b for s in (1, -1)]
    for a, b, c in permutations(idx, 3):
        for sa in (1, -1):
            for sb in (1, -1):
                for sc in (1, -1):
                    out.append(CommTv(sa * a, sb * b, sc * c))
    return out


def all_aut_generators(rank: int) -> list[AutGen]:
    idx = range(1, rank + 1)
    out: list[AutGen] = [
        Transv(sa * a, sb * b) for a in idx for b in idx if a != b for sa in (1, -1) for sb in (1, -1)
    ]
    out += [Swap(a, b) for a in idx for b in idx if a < b]
    out += [Inv(a) for a in idx]
    return out


def magnus_generating_set(n: int) -> list[IAGen]:
    idx = range(1, n + 1)
    gens: list[IAGen] = [Conj(a, b) for a in idx for b in idx if a != b]
    gens += [CommTv(a, b, c) for a in idx for b in idx for c in idx if b < c and a not in (b, c)]
    return gens


def stabilizer_generating_set(n: int, k: int) -> list[IAGen]:
    """Magnus generators lying in the stabilizer of x_{n-k+1}, ..., x_n."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return [g for g in magnus_generating_set(n) if g[0] == "C" or g[1] <= n - k]


def is_positive(g: CommTv) -> bool:
    """A commutator transvection is positive when its middle index is below its last."""
    return abs(g[2]) < abs(g[3])


def canonical_display(g: Gen) -> str:
    """Reporting form: CommTv oriented positively, written as a power."""
    if g[0] == "C":
        return f"C({g[1]},{abs(g[2])})" + ("" if g[2] > 0 else "^-1")
    if g[0] == "Mc":
        if is_positive(g):
            return f"Mc({g[1]:+d},{g[2]:+d},{g[3]:+d})"
        return f"Mc({g[1]:+d},{g[3]:+d},{g[2]:+d})^-1"
    return repr(g)


def gen_from_json(obj: dict) -> Gen:
    try:
        cls = _KINDS[obj["k"]]
    except (KeyError, TypeError):
        raise ValueError(f"unknown generator object {obj!r}") from None
    names = ("a", "b", "c")[: {"C": 2, "Mc": 3, "M": 2, "P": 2, "I": 1}[obj["k"]]]
    try:
        vals = [int(obj[n]) for n in names]
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"generator object {obj!r} is missing integer slots {names}") from None
    return cls(*vals)


def word_from_json(items: Iterable[dict]) -> tuple:
    return tuple(gen_from_json(o) for o in items)


def word_to_json(w: Iterable[Gen]) -> list[dict]:
    return [g.to_json() for g in w]


def format_ia_word(w: Iterable[Gen]) -> str:
    parts = []
    for g in w:
        if g[0] == "C":
            parts.append(f"C{g[1]}{'+' if g[2] > 0 else '-'}{abs(g[2])}")
        else:
            parts.append(f"{g[0]}({','.join(str(x) for x in g[1:])})")
    return " ".join(parts) if parts else "1"

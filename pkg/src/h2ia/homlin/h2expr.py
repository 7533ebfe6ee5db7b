"""Formal integer combinations of H1..H9 terms.

A term is ``(family, params)`` with signed-index parameters in the slot order of
the family. Terms are kept in a canonical orientation: slot-sign flips and slot
permutations that negate the class (flipping a conjugation exponent, reversing
a commutator, swapping the two inner letters of a commutator transvection) are
applied until the parameter tuple is least, and the coefficient absorbs the sign.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from functools import lru_cache

from ..relations import family

Term = tuple[str, tuple[int, ...]]

# (slot permutation, sign) and (slot whose sign may flip, sign) per family.
SIGNED_PERMUTATIONS: dict[str, tuple[tuple[tuple[int, ...], int], ...]] = {
    "H1": (((2, 3, 0, 1), -1),),
    "H2": (((0, 2, 1, 3, 4, 5), -1), ((0, 1, 2, 3, 5, 4), -1), ((3, 4, 5, 0, 1, 2), -1)),
    "H3": (((0, 2, 1, 3, 4), -1),),
}
SIGN_FLIPS: dict[str, tuple[tuple[int, int], ...]] = {
    "H1": ((1, -1), (3, -1)),
    "H3": ((4, -1),),
}


class TorsionTerm(ValueError):
    """A term whose orbit under the negating symmetries contains its own negative."""


def _moves(name: str):
    for perm, sign in SIGNED_PERMUTATIONS.get(name, ()):
        yield (lambda p, perm=perm: tuple(p[k] for k in perm)), sign
    for slot, sign in SIGN_FLIPS.get(name, ()):
        yield (lambda p, slot=slot: p[:slot] + (-p[slot],) + p[slot + 1:]), sign


def _orbit(name: str, params: tuple[int, ...], key=lambda p: p, strict: bool = True) -> dict:
    """Orbit keys with the sign relating each to ``params``.

    When the orbit reaches a key with both signs, ``strict`` raises; otherwise
    every sign in the orbit is reported as 0.
    """
    seen = {key(params): 1}
    frontier = [(params, 1)]
    moves = list(_moves(name))
    torsion = False
    while frontier:
        cur, s = frontier.pop()
        for move, sign in moves:
            img = move(cur)
            k, t = key(img), s * sign
            if k not in seen:
                seen[k] = t
                frontier.append((img, t))
            elif seen[k] != t:
                if strict:
                    raise TorsionTerm(f"{name}{params} is equal to its own negative")
                torsion = True
    return dict.fromkeys(seen, 0) if torsion else seen


@lru_cache(maxsize=None)
def canonical_term(name: str, params: tuple[int, ...]) -> tuple[Term, int]:
    params = family(name).normalize(params)
    orbit = _orbit(name, params)
    best = min(orbit)
    return (name, best), orbit[best]


def _pattern_key(name: str, params: tuple[int, ...]) -> tuple[int, ...]:
    """Parameters up to relabelling indices and flipping the sign of an index class."""
    fam = family(name)
    params = fam.normalize(params)
    flip: dict[int, int] = {}
    label: dict[int, int] = {}
    for p, signed in zip(params, fam.signed):
        if signed and abs(p) not in flip:
            flip[abs(p)] = 1 if p > 0 else -1
    out = []
    for p, signed in zip(params, fam.signed):
        idx = abs(p)
        label.setdefault(idx, len(label) + 1)
        out.append(label[idx] * (flip[idx] * (1 if p > 0 else -1) if signed else 1))
    return tuple(out)


@lru_cache(maxsize=None)
def pattern_of(name: str, params: tuple[int, ...]) -> tuple[Term, int]:
    """Canonical coincidence-and-sign pattern of a term and the sign relating them.

    Two terms with the same pattern differ by a signed permutation of the basis,
    so they agree modulo coboundaries. The sign is 0 when the pattern is
    congruent to its own negative; then only the parity of a coefficient matters.
    """
    params = family(name).normalize(params)
    orbit = _orbit(name, params, key=lambda p: _pattern_key(name, p), strict=False)
    best = min(orbit)
    return (name, best), orbit[best]


class H2Expr(Mapping):
    """Immutable formal sum {term: coefficient} with zero coefficients dropped.

    ``wildcards`` names families whose unspecified instances may also occur.
    """

    __slots__ = ("_terms", "wildcards")

    def __init__(self, terms: Mapping[Term, int] | Iterable[tuple[Term, int]] = (),
                 wildcards: Iterable[str] = ()):
        acc: dict[Term, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (name, params), c in items:
            key, sign = canonical_term(name, tuple(params))
            acc[key] = acc.get(key, 0) + sign * c
        self._terms = {k: v for k, v in sorted(acc.items()) if v}
        self.wildcards = frozenset(wildcards)

    @classmethod
    def term(cls, name: str, *params: int, coef: int = 1) -> "H2Expr":
        return cls([((name, params), coef)])

    def __getitem__(self, key: Term) -> int:
        return self._terms[key]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, H2Expr):
            return NotImplemented
        return self._terms == other._terms and self.wildcards == other.wildcards

    def __hash__(self):
        return hash((tuple(self._terms.items()), self.wildcards))

    def __add__(self, other: "H2Expr") -> "H2Expr":
        return h2_add(self, other)

    def __neg__(self) -> "H2Expr":
        return h2_negate(self)

    def __sub__(self, other: "H2Expr") -> "H2Expr":
        return h2_add(self, h2_negate(other))

    def scaled(self, k: int) -> "H2Expr":
        return H2Expr({t: k * c for t, c in self._terms.items()}, self.wildcards)

    def __repr__(self):
        if not self._terms and not self.wildcards:
            return "0"
        parts = [f"{c:+d}*{name.lower()}({','.join(map(str, p))})" for (name, p), c in self._terms.items()]
        if self.wildcards:
            parts.append("+(" + ",".join(sorted(self.wildcards)) + " generators)")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "terms": [{"family": n, "params": list(p), "coef": c} for (n, p), c in self._terms.items()],
            "wildcards": sorted(self.wildcards),
        }


def h2_add(a: H2Expr, b: H2Expr) -> H2Expr:
    merged: dict[Term, int] = dict(a)
    for t, c in b.items():
        merged[t] = merged.get(t, 0) + c
    return H2Expr(merged, a.wildcards | b.wildcards)


def h2_negate(e: H2Expr) -> H2Expr:
    return e.scaled(-1)


def relabel_params(params: Iterable[int], mapping: Mapping[int, int]) -> tuple[int, ...]:
    """Apply a signed basis substitution {index: signed image}; unlisted indices stay."""
    return tuple(mapping.get(abs(p), abs(p)) * (1 if p > 0 else -1) for p in params)


def h2_relabel(e: H2Expr, mapping: Mapping[int, int]) -> H2Expr:
    """Termwise relabelling by a permutation of indices combined with sign flips."""
    images = [abs(v) for v in mapping.values()]
    if len(set(images)) != len(images) or set(images) != {abs(k) for k in mapping}:
        raise ValueError("relabelling must permute the indices it mentions")
    return H2Expr({(n, relabel_params(p, mapping)): c for (n, p), c in e.items()}, e.wildcards)


def swap_map(i: int, j: int) -> dict[int, int]:
    return {i: j, j: i}


def inversion_map(i: int) -> dict[int, int]:
    return {i: -i}

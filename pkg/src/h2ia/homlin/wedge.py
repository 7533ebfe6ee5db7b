"""The map R ∩ [F,F] → ∧²H_1(IA_n) induced by the Johnson homomorphism.

Each IA generator has a τ-image that is a single signed basis vector of
Hom(Z^n, ∧²Z^n). For a word whose letters have images v_1 .. v_k, the class
Σ_{i<j} v_i ∧ v_j is twice its image under ρ composed with ∧²τ. Words in [F, R]
map to zero, so two sides of an identity in H_2 must agree here. This is only a
necessary condition for the identity.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from ..ia_alphabet import Gen

Coord = tuple[int, int, int]  # (row, i, j) standing for e_i ∧ e_j in row ``row``, i < j
WedgeClass = dict[tuple[Coord, Coord], int]


def tau_coordinate(g: Gen) -> tuple[Coord, int]:
    kind = g[0]
    if kind == "C":
        a, b = g[1], abs(g[2])
        sign = 1 if g[2] > 0 else -1
        # e_b ∧ e_a in row a
        return ((a, b, a), sign) if b < a else ((a, a, b), -sign)
    if kind == "Mc":
        a, b, c = g[1], g[2], g[3]
        sign = (1 if a > 0 else -1) * (1 if b > 0 else -1) * (1 if c > 0 else -1)
        i, j = abs(b), abs(c)
        return ((abs(a), i, j), sign) if i < j else ((abs(a), j, i), -sign)
    raise ValueError(f"{g!r} is not an IA generator")


def psi(w: Sequence[Gen]) -> WedgeClass:
    prefix: dict[Coord, int] = {}
    out: WedgeClass = {}
    for g in w:
        v, s = tau_coordinate(g)
        for u, c in prefix.items():
            if u == v or not c:
                continue
            key, o = ((u, v), 1) if u < v else ((v, u), -1)
            out[key] = out.get(key, 0) + o * c * s
        prefix[v] = prefix.get(v, 0) + s
    return {k: c for k, c in out.items() if c}


def combine(parts: Iterable[tuple[int, WedgeClass]]) -> WedgeClass:
    out: WedgeClass = {}
    for coef, cls in parts:
        for k, c in cls.items():
            out[k] = out.get(k, 0) + coef * c
    return {k: c for k, c in out.items() if c}


PRIME = (1 << 61) - 1


class SpanModP:
    """Incremental row-echelon span of sparse vectors over GF(p)."""

    def __init__(self, p: int = PRIME):
        self.p = p
        self.rows: dict = {}  # pivot key -> normalized row (pivot coefficient 1)

    def _reduce(self, vec: dict) -> dict:
        p = self.p
        v = {k: c % p for k, c in vec.items() if c % p}
        while v:
            pivot = min(v)
            row = self.rows.get(pivot)
            if row is None:
                return v
            f = v[pivot]
            for k, c in row.items():
                nv = (v.get(k, 0) - f * c) % p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: dict) -> bool:
        v = self._reduce(vec)
        if not v:
            return False
        pivot = min(v)
        inv = pow(v[pivot], -1, self.p)
        self.rows[pivot] = {k: c * inv % self.p for k, c in v.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)

    def __len__(self):
        return len(self.rows)

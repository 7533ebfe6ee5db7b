"""The Johnson homomorphism, computed through a degree-2 Magnus expansion.

The expansion sends x_i ↦ 1 + X_i and x_i^{-1} ↦ 1 − X_i + X_i², truncated
after degree 2. For a word in the commutator subgroup the linear part vanishes
and the quadratic part is antisymmetric; its (i, j) entries with i < j are the
coordinates of the image in ∧²Z^n on the basis e_i ∧ e_j.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

from .endomorphisms import Endo, abelianization, apply, is_IA
from .free_words import check_rank, rank_of
from .ia_alphabet import eval_ia, magnus_generating_set
from .homlin.lattice import determinant

# Sparse vector in ∧²Z^n: {(i, j): coefficient} with i < j, zero entries omitted.
Wedge2Vector = dict[tuple[int, int], int]
TauTable = tuple[Wedge2Vector, ...]


@dataclass(frozen=True)
class Degree2Expansion:
    linear: tuple[int, ...]
    quadratic: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.linear)


def expand2(w: Sequence[int], rank: int | None = None) -> Degree2Expansion:
    n = rank_of(w) if rank is None else rank
    check_rank(w, n)
    lin = [0] * n
    quad = [[0] * n for _ in range(n)]
    for x in w:
        i, s = abs(x) - 1, (1 if x > 0 else -1)
        # (1 + L + Q)(1 + sX_i + [s<0]X_i²): new Q gains L ⊗ sX_i.
        for j in range(n):
            if lin[j]:
                quad[j][i] += lin[j] * s
        if s < 0:
            quad[i][i] += 1
        lin[i] += s
    return Degree2Expansion(tuple(lin), tuple(tuple(r) for r in quad))


def multiply_expansions(u: Degree2Expansion, v: Degree2Expansion) -> Degree2Expansion:
    n = u.rank
    lin = tuple(a + b for a, b in zip(u.linear, v.linear))
    quad = tuple(
        tuple(u.quadratic[i][j] + v.quadratic[i][j] + u.linear[i] * v.linear[j] for j in range(n))
        for i in range(n)
    )
    return Degree2Expansion(lin, quad)


def rho(w: Sequence[int], rank: int | None = None) -> Wedge2Vector:
    """Image of a commutator-subgroup word in ∧²Z^n."""
    e = expand2(w, rank)
    if any(e.linear):
        raise ValueError("word has nonzero exponent sum, so it is not in the commutator subgroup")
    n = e.rank
    q = e.quadratic
    for i in range(n):
        if q[i][i] != 0 or any(q[i][j] != -q[j][i] for j in range(i + 1, n)):
            raise AssertionError("quadratic part of a commutator word is not antisymmetric")
    return {(i + 1, j + 1): q[i][j] for i in range(n) for j in range(i + 1, n) if q[i][j]}


def wedge(i: int, j: int) -> Wedge2Vector:
    """e_i ∧ e_j in stored orientation."""
    if i == j:
        return {}
    return {(i, j): 1} if i < j else {(j, i): -1}


def tau(f: Endo) -> TauTable:
    if not is_IA(f):
        raise ValueError("the Johnson homomorphism is only defined on IA endomorphisms")
    rows = []
    for i in range(1, f.rank + 1):
        rows.append(rho(apply(f, (i,)) + (-i,), f.rank))
    return tuple(rows)


def tau_of_word(w, rank: int) -> TauTable:
    return tau(eval_ia(w, rank))


def add_tables(a: TauTable, b: TauTable) -> TauTable:
    out = []
    for ra, rb in zip(a, b):
        row = dict(ra)
        for k, v in rb.items():
            row[k] = row.get(k, 0) + v
        out.append({k: v for k, v in row.items() if v})
    return tuple(out)


def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(combinations(range(1, n + 1), 2))}


def flatten(table: TauTable) -> list[int]:
    """Coordinates of a table, row by row, pairs in lexicographic order."""
    n = len(table)
    pidx = pair_index(n)
    m = len(pidx)
    vec = [0] * (n * m)
    for i, row in enumerate(table):
        for p, c in row.items():
            vec[i * m + pidx[p]] = c
    return vec


def tau_basis_matrix(n: int) -> list[list[int]]:
    """Columns are the flattened tables of the Magnus generators of IA_n."""
    if n < 3:
        raise ValueError("need n >= 3")
    cols = [flatten(tau_of_word((g,), n)) for g in magnus_generating_set(n)]
    size = len(cols[0])
    if len(cols) != size:
        raise AssertionError(f"{len(cols)} generators for a {size}-dimensional target")
    return [[cols[j][i] for j in range(size)] for i in range(size)]


def tau_basis_determinant(n: int) -> int:
    return determinant(tau_basis_matrix(n))


def act_on_table(mat: list[list[int]], mat_inv: list[list[int]], table: TauTable) -> TauTable:
    """Natural GL_n action: (g·φ)(v) = ∧²g(φ(g^{-1}v)).

    ``mat`` is the abelianization of g (column j = image of e_j), ``mat_inv``
    that of g^{-1}.
    """
    n = len(table)
    out = []
    for i in range(n):
        acc: dict[tuple[int, int], int] = {}
        for j in range(n):
            cij = mat_inv[j][i]
            if not cij:
                continue
            for (p, q), c in table[j].items():
                for r in range(n):
                    if not mat[r][p - 1]:
                        continue
                    for s in range(n):
                        if r == s or not mat[s][q - 1]:
                            continue
                        coeff = cij * c * mat[r][p - 1] * mat[s][q - 1]
                        for k, v in wedge(r + 1, s + 1).items():
                            acc[k] = acc.get(k, 0) + coeff * v
        out.append({k: v for k, v in acc.items() if v})
    return tuple(out)


def sparse_rows(table: TauTable) -> list[tuple[int, int, int, int]]:
    """(row, i, j, coefficient) entries for reports."""
    return [(r, i, j, c) for r, row in enumerate(table, start=1) for (i, j), c in sorted(row.items())]


__all__ = [
    "Degree2Expansion",
    "abelianization",
    "act_on_table",
    "add_tables",
    "expand2",
    "flatten",
    "multiply_expansions",
    "rho",
    "sparse_rows",
    "tau",
    "tau_basis_determinant",
    "tau_basis_matrix",
    "tau_of_word",
    "wedge",
]

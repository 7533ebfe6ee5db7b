"""Exact integer linear algebra: Hermite normal form, integer kernels, determinants.

Matrices are lists of rows of Python ints. A lattice is given by spanning row
vectors; its canonical basis is the row Hermite normal form (pivots positive,
entries above each pivot reduced into [0, pivot)).
"""

from __future__ import annotations

from collections.abc import Sequence

IntMatrix = list[list[int]]
IntVector = list[int]


def _echelon(rows: IntMatrix, ncols: int, extra: IntMatrix | None = None):
    """Unimodular row reduction to echelon form.

    ``extra`` rows (same count as ``rows``) receive the same operations; used to
    record the transform. Returns the pivot columns.
    """
    m = len(rows)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if rows[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][col]))
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                if extra is not None:
                    extra[r], extra[piv] = extra[piv], extra[r]
            done = True
            for i in range(r + 1, m):
                q = rows[i][col] // rows[r][col]
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if extra is not None:
                        extra[i] = [x - q * y for x, y in zip(extra[i], extra[r])]
                if rows[i][col]:
                    done = False
            if done:
                break
        if rows[r][col] != 0:
            if rows[r][col] < 0:
                rows[r] = [-x for x in rows[r]]
                if extra is not None:
                    extra[r] = [-x for x in extra[r]]
            pivots.append(col)
            r += 1
    return pivots


def hnf(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = _echelon(rows, ncols)
    basis = rows[: len(pivots)]
    for k, col in enumerate(pivots):
        p = basis[k][col]
        for i in range(k):
            q = basis[i][col] // p
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[k])]
    return basis


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hnf(rows))


def kernel_basis(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    """A basis of the integer kernel {v : M v = 0}, as rows (not normalized)."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    transposed = [[int(matrix[i][j]) for i in range(m)] for j in range(n)]
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivots = _echelon(transposed, m, ident)
    return ident[len(pivots):]


def kernel_lattice(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    """HNF basis of the integer kernel of ``matrix``."""
    return hnf(kernel_basis(matrix))


def mat_vec(matrix: Sequence[Sequence[int]], v: Sequence[int]) -> IntVector:
    return [sum(a * b for a, b in zip(row, v)) for row in matrix]


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return hnf(a) == hnf(b)


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    return hnf(list(basis) + [list(v)]) == hnf(basis)


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in matrix]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def format_matrix(matrix: Sequence[Sequence[int]]) -> str:
    width = max((len(str(x)) for row in matrix for x in row), default=1)
    return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in matrix)

"""The sixteen R5/R6 relations on one ordered triple and their exponent matrix."""

from __future__ import annotations

from ..ia_alphabet import CommTv, Conj, commutator, pw
from .exponents import exp_vector
from .lattice import IntMatrix, hnf, kernel_lattice, mat_vec

A, B, C = 1, 2, 3


def _mc(sa: int, sb: int, sc: int) -> tuple:
    return (CommTv(sa * A, sb * B, sc * C),)


def _c(target: int, e: int = 1) -> tuple:
    return (Conj(A, e * target),)


# The eight commutator transvections on (x_a, x_b, x_c): a-sign varies fastest, then b, then c.
TRANSVECTIONS = tuple(
    CommTv(sa * A, sb * B, sc * C) for sc in (1, -1) for sb in (1, -1) for sa in (1, -1)
)


def _conjugated(conj: int, e: int, sa: int, sb: int, sc: int, other_b: int, other_c: int) -> tuple:
    return pw(_c(conj, e), _mc(sa, sb, sc), _c(conj, -e), _mc(sa, other_b, other_c))


def _paired(first_a: int, sb: int, sc: int, eb: int, ec: int) -> tuple:
    return pw(_mc(first_a, sb, sc), _mc(-first_a, sb, sc), commutator(_c(B, eb), _c(C, ec)))


def relation_words() -> tuple[tuple, ...]:
    """Words r_1 .. r_16 with a, b, c = 1, 2, 3."""
    rs = [
        _conjugated(B, 1, 1, 1, 1, -1, 1),
        _conjugated(B, 1, -1, 1, 1, -1, 1),
        # conjugating by C_ac (not its inverse) is what makes r_3 .. r_6 relators;
        # the exponent counts are the same either way
        _conjugated(C, 1, 1, 1, 1, 1, -1),
        _conjugated(C, 1, -1, 1, 1, 1, -1),
        _conjugated(C, 1, 1, -1, 1, -1, -1),
        _conjugated(C, 1, -1, -1, 1, -1, -1),
        _conjugated(B, 1, 1, 1, -1, -1, -1),
        _conjugated(B, 1, -1, 1, -1, -1, -1),
    ]
    # the c-sign of each pair is the exponent of C_ac in the trailing commutator, negated
    for first in (1, -1):
        for sc in (1, -1):
            for sb in (1, -1):
                rs.append(_paired(first, sb, sc, -sb, -sc))
    return tuple(rs)


# Row i lists the exponent of v_{i+1} in r_1 .. r_16.
EXPECTED_MATRIX: IntMatrix = [
    [1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
]


def _vec(**coeffs: int) -> list[int]:
    v = [0] * 16
    for name, c in coeffs.items():
        v[int(name[1:]) - 1] = c
    return v


# The nine listed generators of the kernel, as coefficient vectors over r_1 .. r_16.
LISTED_KERNEL_VECTORS: IntMatrix = [
    _vec(r1=1, r3=-1, r5=-1, r7=1),
    _vec(r2=1, r4=-1, r6=-1, r8=1),
    _vec(r1=-1, r2=-1, r13=1, r14=1),
    _vec(r3=-1, r4=-1, r13=1, r15=1),
    _vec(r1=1, r2=1, r5=-1, r6=-1, r13=-1, r12=1),
    _vec(r9=1, r13=-1),
    _vec(r10=1, r14=-1),
    _vec(r11=1, r15=-1),
    _vec(r12=1, r16=-1),
]


class MatrixMismatch(AssertionError):
    pass


def build_r5r6_matrix(check: bool = True) -> IntMatrix:
    words = relation_words()
    vectors = [exp_vector(w) for w in words]
    for j, ev in enumerate(vectors, start=1):
        stray = {g: e for g, e in ev.items() if g[0] == "C" or g not in TRANSVECTIONS}
        if stray:
            raise MatrixMismatch(f"r{j} has nonzero exponent on generators outside the table: {stray}")
    matrix = [[ev.get(v, 0) for ev in vectors] for v in TRANSVECTIONS]
    if check:
        for i, (got, want) in enumerate(zip(matrix, EXPECTED_MATRIX), start=1):
            for j, (x, y) in enumerate(zip(got, want), start=1):
                if x != y:
                    raise MatrixMismatch(f"entry (v{i}, r{j}) is {x}, expected value is {y}")
    return matrix


def kernel_report() -> dict:
    matrix = build_r5r6_matrix()
    kernel = kernel_lattice(matrix)
    listed_in_kernel = [not any(mat_vec(matrix, v)) for v in LISTED_KERNEL_VECTORS]
    return {
        "rank": len(kernel),
        "kernel_hnf": kernel,
        "listed_in_kernel": listed_in_kernel,
        "hnf_equal": hnf(LISTED_KERNEL_VECTORS) == kernel,
    }


def relations_are_relators(rank: int = 3) -> list[int]:
    """Indices j whose word r_j fails to evaluate to the identity (expected empty)."""
    from ..ia_alphabet import is_trivial

    return [j for j, w in enumerate(relation_words(), start=1) if not is_trivial(w, rank)]


__all__ = [
    "LISTED_KERNEL_VECTORS",
    "MatrixMismatch",
    "EXPECTED_MATRIX",
    "TRANSVECTIONS",
    "build_r5r6_matrix",
    "kernel_report",
    "relation_words",
    "relations_are_relators",
]

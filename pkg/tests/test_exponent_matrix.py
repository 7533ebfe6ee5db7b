import pytest

from h2ia.homlin import exponent_matrix
from h2ia.homlin.lattice import hnf, mat_vec
from h2ia.homlin.exponent_matrix import (
    LISTED_KERNEL_VECTORS,
    MatrixMismatch,
    build_r5r6_matrix,
    kernel_report,
    relations_are_relators,
)

# Frozen copy, kept separate from the module constant so an edit there is caught.
EXPECTED = [
    [1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
]


def test_matrix_is_bit_exact():
    assert build_r5r6_matrix(check=False) == EXPECTED
    assert build_r5r6_matrix() == EXPECTED


def test_words_are_relators():
    assert relations_are_relators() == []


def test_kernel():
    k = kernel_report()
    assert k["rank"] == 9
    assert all(k["listed_in_kernel"])
    assert k["hnf_equal"]
    for v in LISTED_KERNEL_VECTORS:
        assert mat_vec(EXPECTED, v) == [0] * 8
    assert hnf(LISTED_KERNEL_VECTORS) == k["kernel_hnf"]


def test_mismatch_reported(monkeypatch):
    bad = [row[:] for row in EXPECTED]
    bad[2][4] = 0
    monkeypatch.setattr(exponent_matrix, "EXPECTED_MATRIX", bad)
    with pytest.raises(MatrixMismatch, match=r"\(v3, r5\)"):
        build_r5r6_matrix()

import pytest
import sympy
from hypothesis import given

from h2ia.endomorphisms import abelianization
from h2ia.free_words import commutator, invert
from h2ia.ia_alphabet import CommTv, Conj, eval_aut, eval_ia, inverse_gen, magnus_generating_set
from h2ia.johnson import (
    act_on_table,
    add_tables,
    expand2,
    flatten,
    rho,
    tau,
    tau_basis_determinant,
    tau_basis_matrix,
    tau_of_word,
    wedge,
)
from strategies import RANK, aut_gens, ia_words


def test_expand2_examples():
    e = expand2((), 2)
    assert e.linear == (0, 0) and e.quadratic == ((0, 0), (0, 0))
    assert expand2((1,), 2).linear == (1, 0)
    c = expand2(commutator((1,), (2,)), 2)
    assert c.linear == (0, 0)
    assert c.quadratic == ((0, 1), (-1, 0))
    assert expand2((-1,), 1).quadratic == ((1,),)


def test_rho_examples():
    assert rho(commutator((1,), (2,))) == {(1, 2): 1}
    assert rho((), 3) == {}
    assert rho(commutator((1,), commutator((2,), (3,)))) == {}
    with pytest.raises(ValueError):
        rho((1, 2))


def expected_tau(g, n):
    """Row a of a conjugation C(a,b) is e_b∧e_a; a commutator transvection
    Mc(a,b,c) puts e_b∧e_c (or its negative for the right-hand form) in row |a|."""
    rows = [{} for _ in range(n)]
    if g[0] == "C":
        rows[g[1] - 1] = wedge(abs(g[2]), g[1])
    else:
        a, b, c = g[1:]
        w = wedge(b, c)
        rows[abs(a) - 1] = w if a > 0 else {k: -v for k, v in w.items()}
    return tuple(rows)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tau_images_of_generators(n):
    for g in magnus_generating_set(n):
        assert tau_of_word((g,), n) == expected_tau(g, n)
    assert tau(eval_ia((), n)) == tuple({} for _ in range(n))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_basis_determinant_against_sympy(n):
    m = tau_basis_matrix(n)
    assert len(m) == n * n * (n - 1) // 2
    ref = sympy.Matrix(m).det()
    assert abs(ref) == 1
    assert tau_basis_determinant(n) == ref


def test_tau_rejects_non_ia():
    with pytest.raises(ValueError):
        tau(eval_aut([("M", 1, 2)], 2))
    with pytest.raises(ValueError):
        tau_basis_matrix(2)


def test_negative_commutator_transvection():
    assert tau_of_word((CommTv(-1, 2, 3),), 3) == ({(2, 3): -1}, {}, {})


@given(ia_words(), ia_words())
def test_tau_is_additive(u, v):
    lhs = tau_of_word(tuple(u) + tuple(v), RANK)
    assert lhs == add_tables(tau_of_word(u, RANK), tau_of_word(v, RANK))


@given(aut_gens(), ia_words())
def test_tau_is_equivariant(s, v):
    conj = (s,) + tuple(v) + (inverse_gen(s),)
    f = eval_aut(conj, RANK)
    mat = abelianization(eval_aut((s,), RANK))
    mat_inv = abelianization(eval_aut((inverse_gen(s),), RANK))
    assert tau(f) == act_on_table(mat, mat_inv, tau_of_word(v, RANK))


@given(ia_words())
def test_flatten_is_linear_in_inverse(v):
    a = flatten(tau_of_word(v, RANK))
    b = flatten(tau_of_word(tuple(inverse_gen(g) for g in reversed(v)), RANK))
    assert all(x == -y for x, y in zip(a, b))


def test_rho_of_inverse_commutator():
    c = commutator((1,), (2,))
    assert rho(invert(c)) == {(1, 2): -1}
    assert rho(c + c) == {(1, 2): 2}

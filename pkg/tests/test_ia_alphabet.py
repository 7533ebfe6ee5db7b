import pytest
from hypothesis import given

from h2ia.endomorphisms import compose, is_IA, is_identity_on_basis
from h2ia.ia_alphabet import (
    CommTv,
    Conj,
    Inv,
    Swap,
    Transv,
    canonical_display,
    cyw,
    eval_aut,
    eval_ia,
    gen_from_json,
    inverse_gen,
    iw,
    magnus_generating_set,
    pw,
    stabilizer_generating_set,
    word_from_json,
    word_to_json,
)
from h2ia.relations import RelInstance, expand
from strategies import RANK, aut_gens, ia_gens, ia_words


def test_inverse_conventions():
    assert inverse_gen(Conj(1, 2)) == Conj(1, -2)
    assert inverse_gen(CommTv(1, 2, 3)) == CommTv(1, 3, 2)
    assert inverse_gen(Transv(-1, 2)) == Transv(-1, -2)
    assert inverse_gen(Swap(1, 2)) == Swap(1, 2)
    assert inverse_gen(Inv(3)) == Inv(3)


def test_constructor_checks():
    with pytest.raises(ValueError):
        Conj(1, -1)
    with pytest.raises(ValueError):
        CommTv(1, 2, -2)
    with pytest.raises(ValueError):
        Transv(2, 2)
    with pytest.raises(ValueError):
        Swap(3, 3)
    # the first slot of a conjugation move ignores its sign
    assert Conj(-1, 2) == Conj(1, 2)


def test_pw_iw_cyw():
    g, h, k = Conj(1, 2), CommTv(1, 2, 3), Conj(2, 3)
    assert pw([g], [inverse_gen(g)]) == ()
    assert len(pw([g], [g])) == 2
    r4 = expand(RelInstance("R4", (1, 2, 3)))
    assert pw(r4, ()) == r4
    assert iw([g, h]) == (inverse_gen(h), inverse_gen(g))
    assert iw(()) == ()
    assert cyw([g, h, k]) == (h, k, g)
    # a commutator transvection cancels against its flipped form
    assert pw([CommTv(1, 2, 3)], [CommTv(1, 3, 2)]) == ()


def test_evaluation_examples():
    assert eval_ia([Conj(1, 2)], 2).images[0] == (2, 1, -2)
    assert eval_aut([Transv(-1, 2)], 2).images[0] == (1, -2)
    assert eval_aut([Transv(1, 2)], 2).images[0] == (2, 1)
    assert eval_ia([CommTv(-1, 2, 3)], 3).images[0] == (1, 3, 2, -3, -2)
    with pytest.raises(TypeError):
        eval_ia([Transv(1, 2)], 2)
    with pytest.raises(ValueError):
        eval_ia([Conj(1, 4)], 3)


def test_transvection_and_inverse_compose_to_identity():
    f = eval_aut([Transv(1, 2)], 2)
    g = eval_aut([Transv(1, -2)], 2)
    assert is_identity_on_basis(compose(f, g))
    assert is_identity_on_basis(compose(g, f))
    p = eval_aut([Swap(1, 2)], 2)
    assert is_identity_on_basis(compose(p, p))


def test_magnus_generating_set():
    gens = magnus_generating_set(3)
    assert len(gens) == 9
    assert sum(g[0] == "C" for g in gens) == 6
    assert all(is_IA(eval_ia([g], 3)) for g in gens)
    stab = stabilizer_generating_set(4, 1)
    assert not any(g[0] == "Mc" and g[1] == 4 for g in stab)
    assert all(is_IA(eval_ia([g], 4)) for g in stab)
    with pytest.raises(ValueError):
        stabilizer_generating_set(3, 0)


def test_json_round_trip():
    objs = [{"k": "C", "a": 1, "b": -2}, {"k": "Mc", "a": 1, "b": 2, "c": -3},
            {"k": "M", "a": -1, "b": 2}, {"k": "P", "a": 1, "b": 2}, {"k": "I", "a": 1}]
    w = word_from_json(objs)
    assert word_to_json(w) == objs
    with pytest.raises(ValueError):
        gen_from_json({"k": "Z"})
    with pytest.raises(ValueError):
        gen_from_json({"k": "C", "a": 1})


def test_canonical_display_orients_positively():
    assert canonical_display(CommTv(1, 3, 2)) == "Mc(+1,+2,+3)^-1"
    assert canonical_display(Conj(1, -2)) == "C(1,2)^-1"


@given(ia_gens())
def test_every_ia_generator_is_ia(g):
    assert is_IA(eval_ia([g], RANK))


@given(ia_words())
def test_inverse_word_evaluates_to_inverse(w):
    assert is_identity_on_basis(compose(eval_ia(iw(w), RANK), eval_ia(w, RANK)))


@given(ia_words())
def test_cyclic_shift_is_conjugate(w):
    if not w:
        return
    g = w[0]
    lhs = eval_ia(cyw(w), RANK)
    rhs = compose(compose(eval_ia([inverse_gen(g)], RANK), eval_ia(w, RANK)), eval_ia([g], RANK))
    assert lhs == rhs


@given(aut_gens())
def test_aut_generator_times_inverse_is_identity(s):
    f = compose(eval_aut([s], RANK), eval_aut([inverse_gen(s)], RANK))
    assert is_identity_on_basis(f)

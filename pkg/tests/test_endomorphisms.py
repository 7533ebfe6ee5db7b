import pytest
from hypothesis import given

from h2ia.free_words import multiply
from h2ia.endomorphisms import (
    abelianization,
    apply,
    compose,
    first_moved_letter,
    from_images,
    from_sparse,
    identity,
    is_IA,
    is_identity_on_basis,
)
from strategies import free_words


def test_identity_is_ia_and_fixes_words():
    f = identity(3)
    assert is_IA(f)
    assert is_identity_on_basis(f)
    assert apply(f, (1, -3, 2)) == (1, -3, 2)


def test_conjugation_is_ia_but_not_identity():
    f = from_sparse(3, {1: (2, 1, -2)})
    assert is_IA(f)
    assert not is_identity_on_basis(f)
    assert first_moved_letter(f) == 1


def test_transvection_abelianization():
    f = from_sparse(2, {1: (2, 1)})
    assert abelianization(f) == [[1, 0], [1, 1]]
    assert not is_IA(f)


def test_compose_order():
    f = from_sparse(2, {1: (1, 2)})
    g = from_sparse(2, {2: (2, 2)})
    # (f ∘ g)(x2) = f(x2 x2) = x2 x2, (g ∘ f)(x1) = g(x1 x2) = x1 x2 x2
    assert compose(f, g).images == ((1, 2), (2, 2))
    assert compose(g, f).images == ((1, 2, 2), (2, 2))


def test_bad_inputs():
    with pytest.raises(ValueError):
        from_images([(1,), (3,)])
    with pytest.raises(ValueError):
        from_sparse(2, {3: (1,)})
    with pytest.raises(ValueError):
        compose(identity(2), identity(3))


@given(free_words(rank=3), free_words(rank=3), free_words(rank=3))
def test_apply_is_a_homomorphism(a, b, w):
    f = from_images([a, b, (3,)])
    u, v = w[: len(w) // 2], w[len(w) // 2:]
    assert apply(f, multiply(u, v)) == multiply(apply(f, u), apply(f, v))


@given(free_words(rank=3), free_words(rank=3), free_words(rank=3))
def test_compose_matches_pointwise(a, b, w):
    f = from_images([a, (2,), (3,)])
    g = from_images([(1,), b, (3,)])
    assert apply(compose(f, g), w) == apply(f, apply(g, w))

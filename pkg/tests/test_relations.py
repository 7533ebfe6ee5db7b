from itertools import product

import pytest

from h2ia.ia_alphabet import Conj, is_trivial, iw, pw
from h2ia.relations import (
    BUILTIN,
    H_FAMILIES,
    R_FAMILIES,
    RelInstance,
    default_registry,
    enumerate_instances,
    expand,
    family,
    load_templates,
    register_extra_relation,
    validate,
)

FROZEN_POOL8 = {"R0": 1344, "R1": 1008, "R3": 40320, "R4": 336, "R5": 2688,
                "R6": 2688, "R7": 13440, "R9": 32256}


def brute_force_count(name, pool):
    """Orbits of valid signed parameter tuples under the family's symmetries."""
    fam = family(name)
    signed = [x for i in range(1, pool + 1) for x in (i, -i)]
    seen, orbits = set(), 0
    for params in product(signed, repeat=fam.arity):
        if fam.violation(params) is not None or params in seen:
            continue
        orbits += 1
        frontier = [params]
        seen.add(params)
        while frontier:
            cur = frontier.pop()
            for perm in fam.symmetries:
                img = tuple(cur[k] for k in perm)
                if img not in seen:
                    seen.add(img)
                    frontier.append(img)
    return orbits


def test_r4_expansion():
    assert expand(RelInstance("R4", (1, 2, 3))) == (
        Conj(1, 2), Conj(3, 2), Conj(3, 1), Conj(3, -2), Conj(1, -2), Conj(3, -1))


def test_r0_is_built_into_the_word_model():
    assert expand(RelInstance("R0", (1, 2, 3))) == ()


def test_h1_is_commutator_of_conjugations():
    a, b = Conj(1, 2), Conj(3, 4)
    assert expand(RelInstance("H1", (1, 2, 3, 4))) == pw((a, b), iw((b, a)))


@pytest.mark.parametrize("name", R_FAMILIES + H_FAMILIES)
def test_instances_over_four_letters_are_relators(name):
    for inst in enumerate_instances(name, pool_size=4)[:400]:
        assert is_trivial(expand(inst), 4), inst


@pytest.mark.parametrize("name", [n for n in R_FAMILIES + H_FAMILIES if family(n).arity <= 5])
def test_counts_match_brute_force(name):
    assert len(enumerate_instances(name, pool_size=4)) == brute_force_count(name, 4)


def test_counts_match_brute_force_six_slots():
    for name in ("R2", "H2"):
        assert len(enumerate_instances(name, pool_size=3)) == brute_force_count(name, 3)


@pytest.mark.parametrize("name", sorted(FROZEN_POOL8))
def test_frozen_counts_pool8(name):
    assert len(enumerate_instances(name, pool_size=8)) == FROZEN_POOL8[name]


def test_side_conditions():
    with pytest.raises(ValueError):
        validate(RelInstance("R4", (1, 1, 2)))
    with pytest.raises(ValueError):
        validate(RelInstance("R1", (1, 2, 3)))
    with pytest.raises(ValueError):
        expand(RelInstance("Q7", (1, 2)))
    with pytest.raises(ValueError):
        enumerate_instances("R4", pool_size=5, rank=4)


def test_pool_of_two_letters_has_no_instances():
    assert all(not enumerate_instances(n, pool_size=2) for n in R_FAMILIES)


def test_json_round_trip():
    inst = RelInstance("H2", (1, 2, 3, -4, 5, 6))
    assert RelInstance.from_json(inst.to_json()) == inst
    with pytest.raises(ValueError):
        RelInstance.from_json({"family": "H2"})


def test_register_rejects_non_relator_with_letter():
    reg = BUILTIN.copy()
    with pytest.raises(ValueError, match="x1 maps to"):
        register_extra_relation("Bad", 2, lambda a, b: (Conj(a, b),), registry=reg)
    assert "Bad" not in reg


def test_register_trivial_relation():
    reg = BUILTIN.copy()
    entry = register_extra_relation("Triv", 1, lambda a: (), registry=reg)
    assert entry.duplicate_of is None
    assert "Triv" in reg.extras()


def test_register_flags_duplicate_by_expansion():
    reg = BUILTIN.copy()
    h8 = family("H8")
    entry = register_extra_relation("H8again", h8.arity, h8.builder, registry=reg, signed=h8.signed)
    assert entry.duplicate_of == "H8"
    with pytest.raises(ValueError):
        register_extra_relation("H8again", h8.arity, h8.builder, registry=reg)


def test_template_registration():
    reg = BUILTIN.copy()
    tpl = [{"name": "Comm", "params": ["a", "b", "c"],
            "word": [{"k": "C", "a": "a", "b": "b"}, {"k": "C", "a": "c", "b": "b"},
                     {"k": "C", "a": "a", "b": "-b"}, {"k": "C", "a": "c", "b": "-b"}],
            "signed": [False, True, False]}]
    [entry] = load_templates(tpl, reg)
    assert entry.family.arity == 3
    with pytest.raises(ValueError):
        load_templates([{"name": "X", "params": ["a"], "word": [{"k": "M", "a": "a", "b": 2}]}], reg)


def test_bundled_extra_relations_load():
    reg = default_registry()
    assert reg.extras()
    for name in reg.extras():
        fam = reg[name]
        for inst in enumerate_instances(name, pool_size=fam.arity, registry=reg)[:200]:
            assert is_trivial(expand(inst, reg), fam.arity)

import dataclasses

import pytest

from h2ia.homlin.coinvariants import (
    FULL_ORDER,
    RATIONAL_ORDER,
    MissingEquation,
    ReplayError,
    coinvariants_replay,
    required_patterns,
)
from h2ia.homlin.equations import default_equations
from h2ia.relations import H_FAMILIES

PATTERN_COUNTS = {"H1": 2, "H2": 12, "H3": 2, "H4": 1, "H5": 1, "H6": 5, "H7": 3, "H8": 1, "H9": 1}


def log_families(result):
    return [r["family"] for r in result.log]


def test_required_pattern_counts():
    assert {n: len(required_patterns(n)) for n in H_FAMILIES} == PATTERN_COUNTS


@pytest.mark.parametrize("mode,order", [("full", FULL_ORDER), ("rational", RATIONAL_ORDER)])
def test_replay_completes_in_order(mode, order):
    result = coinvariants_replay(mode=mode)
    assert result.completed() == set(H_FAMILIES)
    assert log_families(result) == [s.family for s in order]
    if mode == "rational":
        assert [r["approach"] for r in result.log] == [s.approach for s in order]


def test_missing_generic_h6_equation():
    eqs = [e for e in default_equations() if e.id != "generich6"]
    with pytest.raises(MissingEquation) as info:
        coinvariants_replay(eqs)
    assert info.value.family == "H6"
    assert "generich6" in str(info.value)


def test_wrong_coefficient_leaves_family_open():
    eqs = []
    for e in default_equations():
        if e.id == "generich1":
            e = dataclasses.replace(e, result=(e.result[0], (2 * e.result[1][0], e.result[1][1])))
        eqs.append(e)
    with pytest.raises(ReplayError) as info:
        coinvariants_replay(eqs)
    assert info.value.family == "H1"


def test_cycle_reported():
    eqs = [dataclasses.replace(e, wildcards=frozenset({"H5"})) if e.id == "h4" else e
           for e in default_equations()]
    order = list(FULL_ORDER)
    order = order[:3] + [order[4], order[3]] + order[5:]
    with pytest.raises(ReplayError) as info:
        coinvariants_replay(eqs, order=order)
    assert info.value.cycle == ("H5", "H4", "H5")
    with pytest.raises(ReplayError) as info:
        coinvariants_replay(order=order)
    assert info.value.blocked_by == ("H4",)


def test_five_letters_are_not_enough():
    with pytest.raises(ReplayError) as info:
        coinvariants_replay(rank=5)
    assert info.value.family == "H2"


def test_bad_arguments():
    with pytest.raises(ValueError):
        coinvariants_replay(mode="p-adic")
    with pytest.raises(ValueError):
        coinvariants_replay(mode="rational", ell=1)

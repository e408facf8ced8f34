from __future__ import annotations

from fractions import Fraction

import pytest
from conftest import CATALOG
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from strategies import aux_connections, splitting_matrices

from liepair.catalog import alternative_choices
from liepair.compare import build_structure, cohomology_algebra, compare_structures
from liepair.lie_pair import Choices

ONE = Fraction(1)


def _assert_equivalent(res):
    assert res["transport_is_chain_map"]
    assert res["f1_is_identity"]
    assert all(r["max_defect"] == 0 for r in res["morphism_identities"])
    assert res["products_agree"]
    assert res["cohomology_1"]["associative"] and res["cohomology_2"]["associative"]


@pytest.mark.parametrize("name", ["solvable", "heisenberg_x", "heisenberg_center", "sl2_borel", "oscillator"])
def test_identical_choices_compare_trivially(name):
    ch = alternative_choices(CATALOG[name])[0]
    res = compare_structures(CATALOG[name], ch, ch, N=3, max_arity=3)
    _assert_equivalent(res)
    assert all(v == 0 for v in res["higher_nonzero_tuples"].values())


@pytest.mark.parametrize("name", ["solvable", "heisenberg_x", "heisenberg_center"])
@pytest.mark.parametrize("i,j", [(0, 1), (0, 2), (1, 3), (2, 3)])
def test_different_choices_give_equivalent_structures(name, i, j):
    chs = alternative_choices(CATALOG[name])
    _assert_equivalent(compare_structures(CATALOG[name], chs[i], chs[j], N=3, max_arity=3))


def test_cohomology_of_the_solvable_pair():
    pair = CATALOG["solvable"]
    chs = alternative_choices(pair)
    res = compare_structures(pair, chs[0], chs[3], N=3, max_arity=3)
    coh = res["cohomology_1"]
    assert coh["ranks"] == {0: 1, 1: 1}
    assert coh["representatives"] == {(0, 0): {((), ()): ONE}, (1, 0): {((0,), ()): ONE}}
    prods = coh["products"]
    unit, xi = (0, 0), (1, 0)
    assert prods[(unit, unit)] == {unit: ONE}
    assert prods[(unit, xi)] == {xi: ONE}
    assert prods[(xi, unit)] == {xi: ONE}
    assert prods[(xi, xi)] == {}


def test_abelian_line_gives_polynomial_product():
    _, A = build_structure(CATALOG["abelian_1_0"], None, 3)
    coh = cohomology_algebra(A)
    assert coh["ranks"] == {0: 4}
    reps = coh["representatives"]
    power = {reps[(0, k)] == {((), (0,) * k): ONE} for k in range(4)}
    assert power == {True}
    for a in range(4):
        for b in range(4 - a):
            assert coh["products"][((0, a), (0, b))] == {(0, a + b): ONE}


def test_heisenberg_cohomology_ranks():
    for name, ranks in [("heisenberg_x", {0: 4, 1: 4}), ("heisenberg_center", {0: 10, 1: 10})]:
        _, A = build_structure(CATALOG[name], None, 3, 2)
        assert cohomology_algebra(A)["ranks"] == ranks


@st.composite
def _two_choices(draw):
    name = draw(st.sampled_from(["solvable", "heisenberg_x", "heisenberg_center", "nonabelian2_full"]))
    pair = CATALOG[name]
    n, m = pair.dim_g, pair.dim_h
    chs = [Choices(draw(splitting_matrices(n, m)), draw(aux_connections(n, 2))) for _ in range(2)]
    return pair, chs


@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(_two_choices())
def test_random_choices_give_equivalent_structures(data):
    pair, (c1, c2) = data
    _assert_equivalent(compare_structures(pair, c1, c2, N=2, max_arity=3))

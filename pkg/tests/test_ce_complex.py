from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import random_pairs

from liepair.catalog import abelian, nonabelian2_full, solvable
from liepair.ce_complex import (
    BModule,
    CEComplex,
    Exterior,
    SBModule,
    TruncationOverflow,
    ULAModule,
    check_degree_operator,
    check_differential_expansion,
    wedge,
    xi,
)
from liepair.enveloping.ug import ULA
from liepair.graded_linear import ONE, complex_cohomology
from liepair.lie_pair import LiePair, antisymmetrized

HEIS = antisymmetrized(3, [(0, 1, 2, 1)])
SL2 = antisymmetrized(3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])


def _plus(*xs):
    out: dict = {}
    for x in xs:
        for k, v in x.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def test_wedge_examples():
    assert wedge(xi(0), xi(0)) == {}
    assert wedge(xi(0), xi(1)) == {(0, 1): ONE}
    assert wedge(xi(1), xi(0)) == {(0, 1): -ONE}
    assert wedge(_plus(xi(0), xi(1)), xi(1)) == {(0, 1): ONE}


ext_elems = st.dictionaries(
    st.lists(st.integers(0, 3), max_size=3, unique=True).map(lambda l: tuple(sorted(l))),
    st.fractions(min_value=-3, max_value=3, max_denominator=2),
    max_size=4,
).map(lambda d: {k: v for k, v in d.items() if v})


@given(ext_elems, ext_elems, ext_elems)
def test_wedge_is_associative(x, y, z):
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


@given(ext_elems, ext_elems)
def test_wedge_is_graded_commutative_on_monomials(x, y):
    for a, ca in x.items():
        for b, cb in y.items():
            sign = -1 if (len(a) * len(b)) % 2 else 1
            lhs = wedge({a: ca}, {b: cb})
            assert lhs == {k: sign * v for k, v in wedge({b: cb}, {a: ca}).items()}


def test_scalar_differential_examples():
    assert Exterior(solvable()).d(xi(0)) == {}
    ext = Exterior(nonabelian2_full())
    assert ext.d(xi(1)) == {(0, 1): -ONE}
    assert ext.d(xi(0)) == {}
    # L_{e_1} ξ² = −ξ² and ι_{e_1} ξ¹ = 1
    assert ext.lie_derivative({0: ONE}, xi(1)) == {(1,): -ONE}
    assert ext.interior({0: ONE}, xi(0)) == {(): ONE}


@pytest.mark.parametrize("brackets, expected", [
    (HEIS, {0: 1, 1: 2, 2: 2, 3: 1}),
    (SL2, {0: 1, 1: 0, 2: 0, 3: 1}),
    (antisymmetrized(2, [(0, 1, 1, 1)]), {0: 1, 1: 1, 2: 0}),
    ({}, {0: 1, 1: 3, 2: 3, 3: 1}),
])
def test_lie_algebra_cohomology_against_known_betti_numbers(brackets, expected):
    n = max(expected)
    ext = Exterior(LiePair(n, n, brackets))
    assert complex_cohomology(ext.d_operator()).ranks() == expected


@settings(max_examples=40, deadline=None)
@given(random_pairs())
def test_cartan_calculus(pair):
    ext = Exterior(pair)
    m = pair.dim_h
    assert (ext.d_operator() @ ext.d_operator()).is_zero()
    for mono in ext.basis:
        w = {mono: ONE}
        for a in range(m):
            ea = {a: ONE}
            assert ext.interior(ea, ext.interior(ea, w)) == {}
            for b in range(m):
                eb = {b: ONE}
                # [L_a, ι_b] = ι_{[a,b]}
                lhs = _plus(ext.lie_derivative(ea, ext.interior(eb, w)),
                            {k: -v for k, v in ext.interior(eb, ext.lie_derivative(ea, w)).items()})
                assert lhs == ext.interior(pair.bracket(ea, eb), w)


def test_exterior_identities_on_catalog(pair):
    assert check_differential_expansion(pair)["max_defect"] == 0
    assert check_degree_operator(pair)["max_defect"] == 0


def test_module_differential_examples():
    pair = solvable()
    cx = CEComplex(pair, BModule(pair))
    assert cx.d({((), 0): ONE}) == {((0,), 0): ONE}
    ula_cx = CEComplex(pair, ULAModule(ULA(pair, 4)))
    for n in range(5):
        word = (0,) * n
        expect = {((0,), word): Fraction(n)} if n else {}
        assert ula_cx.d({((), word): ONE}) == expect
    ab = abelian(3, 1)
    cx = CEComplex(ab, SBModule(ab, 3))
    assert all(not cx.d({((), v): ONE}) for v in cx.module.labels)


@settings(max_examples=25, deadline=None)
@given(random_pairs(), st.integers(0, 3))
def test_module_differentials_square_to_zero(pair, N):
    for module in (BModule(pair), SBModule(pair, N), ULAModule(ULA(pair, N))):
        d = CEComplex(pair, module).d_operator()
        assert (d @ d).is_zero()


@settings(max_examples=25, deadline=None)
@given(random_pairs())
def test_module_differential_is_a_derivation(pair):
    ext = Exterior(pair)
    cx = CEComplex(pair, SBModule(pair, 2), ext)
    for omega in ext.basis:
        f = {omega: ONE}
        df = ext.d(f)
        sign = -1 if len(omega) % 2 else 1
        for key in cx.space.labels:
            x = {key: ONE}
            lhs = cx.d(cx.wedge_left(f, x))
            rhs = _plus(cx.wedge_left(df, x), {k: sign * v for k, v in cx.wedge_left(f, cx.d(x)).items()})
            assert lhs == rhs


def test_truncation_overflow_is_loud():
    ula = ULA(solvable(), 2)
    with pytest.raises(TruncationOverflow) as err:
        ula.pbw((0, 0, 0))
    assert err.value.weight == 3
    with pytest.raises(TruncationOverflow):
        ula.ug.multiply({(1,): ONE}, {(1, 1): ONE}, cap=2)

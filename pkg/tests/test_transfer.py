from __future__ import annotations

import itertools

import pytest
from conftest import CATALOG, structure

from liepair.ce_complex import TruncationOverflow
from liepair.enveloping import ug_multiply
from liepair.graded_linear import ONE, vadd
from liepair.transfer import (
    AInftyStructure,
    check_inclusion_morphism,
    check_projection_morphism,
    direct_inclusion_component,
    promote_morphisms,
    stasheff_defect,
)

DEGENERATE = ["abelian_1_0", "solvable_h0", "heisenberg_h0", "sl2_h0"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stasheff_identities_low_arity(pair, n):
    _, A = structure(pair.name)
    assert stasheff_defect(A, n)["max_defect"] == 0


@pytest.mark.parametrize("name", ["solvable", "heisenberg_x", "heisenberg_center", "nonabelian2_full",
                                  "oscillator"])
def test_stasheff_identity_arity_four(name):
    _, A = structure(name)
    assert stasheff_defect(A, 4)["max_defect"] == 0


def test_nonzero_m4_at_truncation_four():
    _, A = structure("heisenberg_center", 4, 4)
    assert A.table(4), "expected a nonzero m4"
    assert stasheff_defect(A, 4)["max_defect"] == 0


class _NoProductSign(AInftyStructure):
    def lam(self, t):
        out: dict = {}
        for k in range(1, len(t)):
            left, right = self.eta(t[:k]), self.eta(t[k:])
            if left and right:
                vadd(out, self.alg.multiply(left, right))
        return out


class _NoSuspensionSign(AInftyStructure):
    def m(self, t):
        return self.b(t)


@pytest.mark.parametrize("cls", [_NoProductSign, _NoSuspensionSign])
@pytest.mark.parametrize("name", ["solvable", "heisenberg_center", "sl2_borel"])
def test_stasheff_gate_detects_sign_errors(cls, name):
    _, A = structure(name)
    broken = cls(A.c, A.alg, A.weight_cap, A.arity_cap)
    assert any(stasheff_defect(broken, n)["max_defect"] for n in (2, 3))


def test_stasheff_gate_detects_a_single_wrong_coefficient():
    _, A = structure("heisenberg_center")
    broken = AInftyStructure(A.c, A.alg, A.weight_cap, A.arity_cap)
    t = next(t for t in A.tuples(3) if A.b(t))
    val = dict(A.b(t))
    k = next(iter(val))
    val[k] += 1
    broken._b[t] = val
    assert stasheff_defect(broken, 3)["max_defect"] != 0 or stasheff_defect(broken, 4)["max_defect"] != 0


@pytest.mark.parametrize("name", DEGENERATE)
def test_degenerate_pairs_reproduce_the_enveloping_algebra(name):
    mc, A = structure(name)
    pair = CATALOG[name]
    ula = mc.env.ula
    V = A.V
    rev = list(reversed(range(pair.dim_g)))
    for a, b in itertools.product(range(V.dim), repeat=2):
        if not A.admissible((a, b)):
            continue
        (_, u), (_, v) = V.labels[a], V.labels[b]
        x = {tuple(pair.dim_h + l for l in lab): c for lab, c in ula.pbw(u).items()}
        y = {tuple(pair.dim_h + l for l in lab): c for lab, c in ula.pbw(v).items()}
        oracle = ula.project_ULA(ug_multiply(pair, x, y, order=rev))
        assert A.m((a, b)) == {V.index[((), lab)]: c for lab, c in oracle.items()}
    for n in (3, 4):
        assert A.table(n) == []


def test_unit_and_first_operation(pair):
    mc, A = structure(pair.name)
    V = A.V
    one = V.index[((), ())]
    for x in range(V.dim):
        assert A.m((one, x)) == {x: ONE}
        right = A.m((x, one))
        assert right in ({x: ONE}, {x: -ONE})
    assert mc.contraction.d == mc.d_ULA
    for j in range(V.dim):
        assert A.m((j,)) == mc.d_ULA.cols[j]


@pytest.mark.parametrize("name", ["heisenberg_center", "sl2_borel", "oscillator"])
def test_degrees_and_weights_of_operations(name):
    _, A = structure(name)
    V = A.V
    for n in (2, 3):
        for t in A.tuples(n):
            for k in A.m(t):
                assert V.degrees[k] == sum(A.degrees(t)) + 2 - n
                assert V.weights[k] <= A.weight(t)


def test_overflow_is_reported():
    _, A = structure("solvable")
    heavy = A.V.index[((), (0, 0, 0))]
    with pytest.raises(TruncationOverflow):
        A.m((heavy, heavy))


def test_first_taylor_coefficients(pair):
    mc, A = structure(pair.name)
    inc, proj = promote_morphisms(A)
    for j in range(A.V.dim):
        assert inc((j,)) == mc.contraction.I.cols[j]
    for j in range(mc.big.dim):
        assert proj((j,)) == mc.P_U.cols[j]


@pytest.mark.parametrize("name", ["solvable", "heisenberg_center", "sl2_borel", "nonabelian2_full"])
def test_morphism_identities(name):
    _, A = structure(name)
    for n in (1, 2, 3):
        assert check_inclusion_morphism(A, n)["max_defect"] == 0
        assert check_projection_morphism(A, n, sample=150, seed=n)["max_defect"] == 0


@pytest.mark.parametrize("name", ["heisenberg_center", "sl2_borel"])
def test_inclusion_tree_formula_matches_bar_construction(name):
    _, A = structure(name)
    for n in (2, 3):
        for t in A.tuples(n):
            assert A.infinity_inclusion(t) == direct_inclusion_component(A, t)


def test_degenerate_higher_taylor_coefficients_vanish():
    for name in DEGENERATE:
        _, A = structure(name)
        for t in A.tuples(2):
            assert A.infinity_inclusion(t) == {}


def test_parallel_evaluation_matches_serial():
    _, A = structure("heisenberg_center")
    _, B = structure("heisenberg_center", 3, 4, 0)
    assert stasheff_defect(A, 3, parallel=4) == stasheff_defect(B, 3, parallel=1)

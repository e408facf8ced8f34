"""Comparing transferred structures built from different choices, and the
induced product on cohomology.

Two runs with different splittings / aux connections use different frames
on the big side and different pbw coordinates on the small side.  We
compare them through

* the transport of the big algebra from one frame to the other (a strict
  dg algebra isomorphism: every frame generator is a concrete section), and
* reference coordinates on Λh^∨ ⊗ U_{L/A}: classes of sorted words in the
  document basis complement letters.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .ce_complex import TruncationOverflow
from .enveloping.ug import ULA
from .enveloping.uenv import lmul_ext
from .graded_linear import (
    ONE,
    ZERO,
    LinearOperator,
    complex_cohomology,
    invert,
    vadd,
    vaddterm,
)
from .hpl import MainContraction, build_main_contraction
from .lie_pair import Choices, LiePair
from .pullback import Section
from .transfer import AInftyStructure, BigAlgebra, TensorOps, compositions, transfer


def _section_to_doc(mc: MainContraction, s: Section) -> Section:
    nu: dict = {}
    for a, f in s.nu.items():
        for b, c in mc.S.cols[a].items():
            vadd(nu.setdefault(b, {}), f, c)
    return Section(s.X, nu).clean()


def _section_from_doc(mc: MainContraction, s: Section, Sinv: LinearOperator) -> Section:
    nu: dict = {}
    for a, f in s.nu.items():
        for b, c in Sinv.cols[a].items():
            vadd(nu.setdefault(b, {}), f, c)
    return Section(s.X, nu).clean()


def transport_operator(mc1: MainContraction, mc2: MainContraction) -> LinearOperator:
    """Big space of run 1 -> big space of run 2 (frame change, multiplicative)."""
    S2inv = invert(mc2.S)
    pm1, pm2 = mc1.pm, mc2.pm
    uenv2 = mc2.env.uenv
    images = []
    for g in range(pm1.ngen):
        doc = _section_to_doc(mc1, pm1.gens[g])
        coords = pm2.decompose(_section_from_doc(mc2, doc, S2inv))
        images.append(uenv2.from_coords(coords))
    word_cache: dict = {(): {((), ()): ONE}}

    def word_image(w):
        if w not in word_cache:
            word_cache[w] = uenv2.multiply(images[w[0]], word_image(w[1:]))
        return word_cache[w]

    big1, big2 = mc1.big, mc2.big

    def col(j):
        mono, w = big1.labels[j]
        return big2.to_indices(mc2.env.check_weight(lmul_ext({mono: ONE}, word_image(w)), "transport"))

    return LinearOperator.from_function(big1, big2, 0, col)


def reference_operator(mc: MainContraction, doc_ula: ULA) -> LinearOperator:
    """Small space (pbw coordinates of this run) -> reference coordinates."""
    small = mc.small
    ula = mc.env.ula
    m = mc.pair.dim_h
    S = mc.S
    ug = doc_ula.ug
    cls_cache: dict = {}

    def class_to_doc(label):
        if label not in cls_cache:
            elem = {(): ONE}
            for l in label:
                elem = ug.multiply(elem, {(a,): c for a, c in S.cols[m + l].items()})
            cls_cache[label] = doc_ula.project_class(elem)
        return cls_cache[label]

    def col(j):
        mono, b = small.labels[j]
        out: dict = {}
        for label, c in ula.pbw(b).items():
            for label2, c2 in class_to_doc(label).items():
                vaddterm(out, (mono, label2), c * c2)
        return small.to_indices(out)

    return LinearOperator.from_function(small, small, 0, col)


class ComparisonMorphism:
    """ℙ₂ ∘ T ∘ 𝕀₁ on the suspension, evaluated on basis tuples of run 1's small space."""

    def __init__(self, A1: AInftyStructure, A2: AInftyStructure, T: LinearOperator):
        self.A1, self.A2, self.T = A1, A2, T
        self.ops2 = TensorOps(A2.c, A2.alg)
        self._E: dict = {}
        self._C: dict = {}

    def E(self, t):
        if t not in self._E:
            self._E[t] = self.T.apply(self.A1.eta(t))
        return self._E[t]

    def __call__(self, t: tuple) -> dict:
        t = tuple(t)
        if t in self._C:
            return self._C[t]
        self.A1._check(t)
        n = len(t)
        out: dict = {}
        for k in range(1, n + 1):
            for comp in compositions(n, k):
                blocks, pos = [], 0
                for size in comp:
                    blocks.append(self.E(t[pos:pos + size]))
                    pos += size
                if any(not b for b in blocks):
                    continue
                tensor: dict = {}
                for combo in itertools.product(*[list(b.items()) for b in blocks]):
                    c = ONE
                    for _, a in combo:
                        c *= a
                    vaddterm(tensor, tuple(i for i, _ in combo), c)
                vadd(out, self.ops2.projection_component(tensor, k))
        self._C[t] = out
        return out


def morphism_identity_defect(C, A1: AInftyStructure, A2: AInftyStructure, n: int) -> dict:
    """Σ C(1^r ⊗ b_s ⊗ 1^t) − Σ b'_k(C ⊗ … ⊗ C) on all admissible tuples of arity n."""
    worst, wit, count = ZERO, None, 0
    for t in A1.tuples(n):
        count += 1
        degs = A1.degrees(t)
        lhs: dict = {}
        for s in range(1, n + 1):
            for r in range(0, n - s + 1):
                sign = -1 if sum(d - 1 for d in degs[:r]) % 2 else 1
                for j, c in A1.b(t[r:r + s]).items():
                    vadd(lhs, C(t[:r] + (j,) + t[r + s:]), sign * c)
        for k in range(1, n + 1):
            for comp in compositions(n, k):
                blocks, pos = [], 0
                for size in comp:
                    blocks.append(C(t[pos:pos + size]))
                    pos += size
                if any(not b for b in blocks):
                    continue
                for combo in itertools.product(*[list(b.items()) for b in blocks]):
                    c = ONE
                    for _, a in combo:
                        c *= a
                    tt = tuple(i for i, _ in combo)
                    if not A2.admissible(tt):
                        raise TruncationOverflow("morphism output leaves the truncation")
                    vadd(lhs, A2.b(tt), -c)
        size = max((abs(v) for v in lhs.values()), default=ZERO)
        if size > worst:
            worst, wit = size, t
    return {"arity": n, "tuples": count, "max_defect": worst, "witness": wit}


def build_structure(pair: LiePair, choices: Choices | None, N: int, max_arity: int = 4):
    mc = build_main_contraction(pair, choices, N)
    alg = BigAlgebra(mc.big, mc.env.multiply)
    return mc, transfer(mc.contraction, alg, N, max_arity)


def cohomology_algebra(A: AInftyStructure, ref: LinearOperator | None = None) -> dict:
    """Basis of H(m_1) and the product induced by m_2 (in reference coordinates if given).

    Products whose inputs would leave the weight truncation are omitted.
    """
    V = A.V
    R = ref or LinearOperator.identity(V)
    Rinv = invert(R)
    m1 = R @ A.c.d @ Rinv
    H = complex_cohomology(m1)
    basis = []
    for d in sorted(H.representatives):
        for k, rep in enumerate(H.representatives[d]):
            basis.append((d, k, rep))
    wt = V.weights

    def maxw(v):
        return max((wt[i] for i in v), default=0)

    table = {}
    for (d1, k1, u), (d2, k2, v) in itertools.product(basis, basis):
        if maxw(u) + maxw(v) > A.weight_cap:
            continue
        prod = R.apply(A.m_multi([Rinv.apply(u), Rinv.apply(v)]))
        d3 = d1 + d2
        coords = H.project(prod, d3) if prod else {}
        table[((d1, k1), (d2, k2))] = {(d3, i): c for i, c in sorted(coords.items())}
    # associativity where every product is inside the truncation
    assoc_fail = []
    index = {(d, k): (d, k, rep) for d, k, rep in basis}

    def mul(a, b):
        return table.get((a, b))

    def mul_vec(vec, b, left=True):
        out: dict = {}
        for key, c in vec.items():
            val = mul(key, b) if left else mul(b, key)
            if val is None:
                return None
            vadd(out, val, c)
        return out

    for a, b, c in itertools.product(index, repeat=3):
        ab = mul(a, b)
        bc = mul(b, c)
        if ab is None or bc is None:
            continue
        lhs = mul_vec(ab, c, left=True)
        rhs = mul_vec(bc, a, left=False)
        if lhs is None or rhs is None:
            continue
        if lhs != rhs:
            assoc_fail.append((a, b, c))
    return {
        "ranks": H.ranks(),
        "representatives": {(d, k): {V.labels[i]: c for i, c in sorted(rep.items())} for d, k, rep in basis},
        "products": table,
        "associative": not assoc_fail,
        "associativity_failures": assoc_fail,
    }


def compare_structures(pair: LiePair, choices1: Choices, choices2: Choices, N: int = 3,
                       max_arity: int = 3, check_arity: int | None = None) -> dict:
    mc1, A1 = build_structure(pair, choices1, N, max_arity)
    mc2, A2 = build_structure(pair, choices2, N, max_arity)
    doc_ula = ULA(pair, N)
    T = transport_operator(mc1, mc2)
    R1 = reference_operator(mc1, doc_ula)
    R2 = reference_operator(mc2, doc_ula)
    R1inv = invert(R1)
    C = ComparisonMorphism(A1, A2, T)
    V = A1.V
    f1 = LinearOperator.from_function(V, V, 0, lambda j: R2.apply(C((j,))))
    f1_ref = f1 @ R1inv
    identity = f1_ref == LinearOperator.identity(V)
    higher = {}
    for n in range(2, max_arity + 1):
        nz = 0
        for t in A1.tuples(n):
            if C(t):
                nz += 1
        higher[n] = nz
    check_arity = max_arity if check_arity is None else check_arity
    identities = [morphism_identity_defect(C, A1, A2, n) for n in range(1, check_arity + 1)]
    coh1 = cohomology_algebra(A1, R1)
    coh2 = cohomology_algebra(A2, R2)
    return {
        "f1_is_identity": identity,
        "f1_reference": f1_ref,
        "higher_nonzero_tuples": higher,
        "morphism_identities": identities,
        "cohomology_1": coh1,
        "cohomology_2": coh2,
        "products_agree": coh1["products"] == coh2["products"] and coh1["ranks"] == coh2["ranks"],
        "transport_is_chain_map": (T @ mc1.contraction.D) == (mc2.contraction.D @ T),
    }

"""Exterior algebra Λh^∨, Cartan calculus and Chevalley–Eilenberg complexes.

Exterior elements are dicts mapping strictly increasing index tuples
(monomials ξ^{i1}∧…∧ξ^{ip}) to Fractions.  Derivations of Λh^∨ are stored
by their values on the generators: ``{k: X(ξ^k)}`` together with a degree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .graded_linear import (
    ONE,
    ZERO,
    GradedSpace,
    InvalidInput,
    LinearOperator,
    vadd,
    vaddterm,
    vscale,
)
from .lie_pair import LiePair, bott


class TruncationOverflow(ArithmeticError):
    def __init__(self, message: str, weight: int | None = None):
        super().__init__(message)
        self.weight = weight


# ---------------------------------------------------------------------------
# exterior algebra

@lru_cache(maxsize=None)
def wedge_mono(a: tuple, b: tuple):
    """ξ^a ∧ ξ^b = sign · ξ^c; returns (0, None) when a and b overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return 0, None
    # count inversions between a (left block) and b (right block)
    inv = 0
    for x in a:
        for y in b:
            if y < x:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def wedge(x: dict, y: dict) -> dict:
    out: dict = {}
    for a, u in x.items():
        for b, v in y.items():
            s, c = wedge_mono(a, b)
            if s:
                vaddterm(out, c, s * u * v)
    return out


def ext_degree(x: dict) -> int | None:
    """Degree of a homogeneous exterior element (None for zero)."""
    degs = {len(k) for k in x}
    if not degs:
        return None
    if len(degs) > 1:
        raise InvalidInput("inhomogeneous exterior element")
    return degs.pop()


def ext_basis(m: int, degree: int | None = None) -> list[tuple]:
    if degree is not None:
        return list(combinations(range(m), degree))
    out = []
    for p in range(m + 1):
        out.extend(combinations(range(m), p))
    return out


def xi(k: int) -> dict:
    return {(k,): ONE}


def ext_one() -> dict:
    return {(): ONE}


def split_by_degree(x: dict) -> dict:
    parts: dict = {}
    for k, v in x.items():
        parts.setdefault(len(k), {})[k] = v
    return parts


# ---------------------------------------------------------------------------
# derivations

def apply_derivation(vals: dict, deg: int, x: dict) -> dict:
    """Apply the degree-``deg`` derivation with ξ^k -> vals[k] to x.

    X(ξ^{i1}…ξ^{ip}) = Σ_r (−1)^{deg·(r−1)} ξ^{i1}…X(ξ^{ir})…ξ^{ip}.
    """
    out: dict = {}
    odd = deg % 2
    for mono, c in x.items():
        for r, k in enumerate(mono):
            val = vals.get(k)
            if not val:
                continue
            sign = -1 if (odd and r % 2) else 1
            pre = {mono[:r]: ONE}
            post = {mono[r + 1:]: ONE}
            vadd(out, wedge(pre, wedge(val, post)), sign * c)
    return out


def derivation_bracket(X: dict, dx: int, Y: dict, dy: int, m: int) -> dict:
    """[X, Y](ξ^k) = X(Y ξ^k) − (−1)^{|X||Y|} Y(X ξ^k)."""
    sign = -1 if (dx * dy) % 2 else 1
    out = {}
    for k in range(m):
        v = apply_derivation(X, dx, Y.get(k, {}))
        vadd(v, apply_derivation(Y, dy, X.get(k, {})), -sign)
        if v:
            out[k] = v
    return out


def derivation_scale(f: dict, X: dict) -> dict:
    """(f·X)(ξ^k) = f ∧ X(ξ^k)."""
    out = {}
    for k, v in X.items():
        w = wedge(f, v)
        if w:
            out[k] = w
    return out


def derivation_add(X: dict, Y: dict, scale=ONE) -> dict:
    out = {k: dict(v) for k, v in X.items()}
    for k, v in Y.items():
        w = vadd(out.get(k, {}), v, scale)
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def clean_derivation(X: dict) -> dict:
    return {k: v for k, v in X.items() if v}


class Exterior:
    """Λh^∨ for a fixed Lie algebra h, with its differential."""

    def __init__(self, pair: LiePair):
        m = pair.dim_h
        self.m = m
        self.pair = pair
        dgen = {}
        for k in range(m):
            v: dict = {}
            for i in range(m):
                for j in range(i + 1, m):
                    c = pair.c(i, j, k) - pair.c(j, i, k)
                    if c:
                        vaddterm(v, (i, j), -c / 2)
            if v:
                dgen[k] = v
        self.d_gen = dgen
        self.basis = ext_basis(m)

    def d(self, x: dict) -> dict:
        return apply_derivation(self.d_gen, 1, x)

    def interior_derivation(self, a: dict) -> dict:
        return {k: {(): c} for k, c in a.items() if c and k < self.m}

    def interior(self, a: dict, x: dict) -> dict:
        return apply_derivation(self.interior_derivation(a), -1, x)

    def lie_derivation(self, a: dict) -> dict:
        """L_a = [d, ι_a] as a degree-0 derivation."""
        return derivation_bracket(self.d_gen, 1, self.interior_derivation(a), -1, self.m)

    def lie_derivative(self, a: dict, x: dict) -> dict:
        return vadd(self.d(self.interior(a, x)), self.interior(a, self.d(x)))

    def dual_derivation(self, op) -> dict:
        """Even derivation dual to a linear map op on h (given as callable on h-vectors).

        ξ^j ↦ −Σ_k ⟨ξ^j, op(e_k)⟩ ξ^k.
        """
        out: dict = {}
        for k in range(self.m):
            img = op({k: ONE})
            for j, c in img.items():
                vaddterm(out.setdefault(j, {}), (k,), -c)
        return {j: v for j, v in out.items() if v}

    def space(self) -> GradedSpace:
        return GradedSpace(tuple(self.basis), tuple(len(b) for b in self.basis), name="Λh^∨")

    def d_operator(self) -> LinearOperator:
        sp = self.space()
        return LinearOperator.from_function(
            sp, sp, 1, lambda j: sp.to_indices(self.d({sp.labels[j]: ONE})))


def d_scalar(pair: LiePair, x: dict) -> dict:
    return Exterior(pair).d(x)


def interior(pair: LiePair, a: dict, x: dict) -> dict:
    return Exterior(pair).interior(a, x)


def lie_derivative(pair: LiePair, a: dict, x: dict) -> dict:
    return Exterior(pair).lie_derivative(a, x)


def check_differential_expansion(pair: LiePair) -> dict:
    """Defect of d − Σ_k (ξ^k L_{e_k} − (dξ^k) ι_{e_k}) on every basis monomial."""
    ext = Exterior(pair)
    worst = ZERO
    witness = None
    for mono in ext.basis:
        x = {mono: ONE}
        acc = ext.d(x)
        for k in range(ext.m):
            ek = {k: ONE}
            vadd(acc, wedge(xi(k), ext.lie_derivative(ek, x)), -ONE)
            vadd(acc, wedge(ext.d(xi(k)), ext.interior(ek, x)))
        size = max((abs(v) for v in acc.values()), default=ZERO)
        if size > worst:
            worst, witness = size, mono
    return {"max_defect": worst, "witness": witness, "checked": len(ext.basis)}


def check_degree_operator(pair: LiePair) -> dict:
    """Σ_k ξ^k ∧ ι_{e_k} ω = |ω| ω on every basis monomial."""
    ext = Exterior(pair)
    worst = ZERO
    witness = None
    for mono in ext.basis:
        x = {mono: ONE}
        acc: dict = {}
        for k in range(ext.m):
            vadd(acc, wedge(xi(k), ext.interior({k: ONE}, x)))
        vadd(acc, x, -Fraction(len(mono)))
        size = max((abs(v) for v in acc.values()), default=ZERO)
        if size > worst:
            worst, witness = size, mono
    return {"max_defect": worst, "witness": witness, "checked": len(ext.basis)}


# ---------------------------------------------------------------------------
# coefficient modules

class CoefficientModule:
    """An h-module with a finite basis; ``act(k, label)`` is e_k ▷ label."""

    kind = "abstract"

    def __init__(self, labels, weights, act):
        self.labels = tuple(labels)
        self.weights = tuple(weights)
        self._act = act

    def act(self, k: int, label) -> dict:
        return self._act(k, label)


class BModule(CoefficientModule):
    kind = "B"

    def __init__(self, pair: LiePair):
        r = pair.dim_b
        cache = {}
        for k in range(pair.dim_h):
            for l in range(r):
                cache[(k, l)] = bott(pair, {k: ONE}, {l: ONE})
        super().__init__(range(r), [1] * r, lambda k, l: cache[(k, l)])


def sym_monomials(r: int, max_weight: int) -> list[tuple]:
    """Sorted index tuples over range(r) of length 0..max_weight."""
    from itertools import combinations_with_replacement

    out = []
    for n in range(max_weight + 1):
        out.extend(combinations_with_replacement(range(r), n))
    return out


class SBModule(CoefficientModule):
    """S^{≤N}B with the derivation extension of the Bott action."""

    kind = "SB"

    def __init__(self, pair: LiePair, N: int):
        r = pair.dim_b
        self.N = N
        base = {}
        for k in range(pair.dim_h):
            for l in range(r):
                base[(k, l)] = bott(pair, {k: ONE}, {l: ONE})

        @lru_cache(maxsize=None)
        def act(k, mono):
            out: dict = {}
            for pos, l in enumerate(mono):
                rest = mono[:pos] + mono[pos + 1:]
                for l2, c in base[(k, l)].items():
                    vaddterm(out, tuple(sorted(rest + (l2,))), c)
            return out

        labels = sym_monomials(r, N)
        super().__init__(labels, [len(t) for t in labels], act)


class ULAModule(CoefficientModule):
    """U_{L/A}^{≤N} in pbw coordinates; h acts by left multiplication."""

    kind = "ULA"

    def __init__(self, ula):
        self.ula = ula
        labels = ula.pbw_labels
        super().__init__(labels, [len(t) for t in labels], ula.act_h)


# ---------------------------------------------------------------------------
# CE complex with coefficients

class CEComplex:
    """Λh^∨ ⊗ V with d(ω⊗v) = dω⊗v + Σ_k ξ^k∧ω ⊗ e_k▷v.

    Elements are dicts (monomial, module label) -> Fraction.
    """

    def __init__(self, pair: LiePair, module: CoefficientModule, ext: Exterior | None = None):
        self.pair = pair
        self.ext = ext or Exterior(pair)
        self.module = module
        labels = []
        degrees = []
        weights = []
        for mono in self.ext.basis:
            for v, w in zip(module.labels, module.weights):
                labels.append((mono, v))
                degrees.append(len(mono))
                weights.append(w)
        self.space = GradedSpace(tuple(labels), tuple(degrees), tuple(weights),
                                 name=f"Λh^∨⊗{module.kind}")
        self._labelset = set(labels)

    def d(self, x: dict) -> dict:
        out: dict = {}
        ext = self.ext
        for (mono, v), c in x.items():
            for m2, c2 in ext.d({mono: ONE}).items():
                vaddterm(out, (m2, v), c * c2)
            for k in range(ext.m):
                s, m2 = wedge_mono((k,), mono)
                if not s:
                    continue
                for v2, c2 in self.module.act(k, v).items():
                    vaddterm(out, (m2, v2), s * c * c2)
        for key in out:
            if key not in self._labelset:
                raise TruncationOverflow(f"coefficient {key[1]!r} leaves the truncation",
                                         weight=len(key[1]) if isinstance(key[1], tuple) else None)
        return out

    def d_operator(self) -> LinearOperator:
        sp = self.space
        return LinearOperator.from_function(
            sp, sp, 1, lambda j: sp.to_indices(self.d({sp.labels[j]: ONE})))

    def wedge_left(self, f: dict, x: dict) -> dict:
        out: dict = {}
        for (mono, v), c in x.items():
            for m2, c2 in f.items():
                s, m3 = wedge_mono(m2, mono)
                if s:
                    vaddterm(out, (m3, v), s * c * c2)
        return out


def d_module(cx: CEComplex, x: dict) -> dict:
    return cx.d(x)

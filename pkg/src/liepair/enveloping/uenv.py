"""Enveloping algebra of the pullback algebroid over Λh^∨, by rewriting.

Elements are dicts (monomial, word) -> Fraction meaning ξ^monomial · w with
coefficients on the left and w a nondecreasing word in frame generators
(σ < α < τ) with no repeated odd letter.  Rewriting rules:

    g·f  -> (−1)^{|g||f|} f·g + X_g(f)            (f ∈ Λh^∨)
    x·y  -> (−1)^{|x||y|} y·x + [x, y]            (x > y)
    x·x  -> ½[x, x]                                (x odd)

Also: the connection ∇ on sections, the PBW map from the symmetric
algebra, D_U = [s_i, −] and the projection P_U onto Λh^∨ ⊗ U_{L/A}.
"""

from __future__ import annotations

from fractions import Fraction

from ..ce_complex import TruncationOverflow, wedge_mono
from ..graded_linear import ONE, GradedSpace, LinearOperator, vadd, vaddterm
from ..pullback import PullbackModule
from .sym import SymAlgebra, enumerate_words
from .ug import ULA

HALF = Fraction(1, 2)


def lmul_ext(f: dict, x: dict) -> dict:
    """f · x for f ∈ Λh^∨ (left coefficient multiplication)."""
    out: dict = {}
    for m1, a in f.items():
        for (m2, w), b in x.items():
            s, mono = wedge_mono(m1, m2)
            if s:
                vaddterm(out, (mono, w), s * a * b)
    return out


class UEnv:
    def __init__(self, pm: PullbackModule, cap: int):
        self.pm = pm
        self.cap = cap
        self.deg = pm.gen_degree
        self.odd = lambda g: pm.gen_degree[g] % 2 == 1
        self._gw: dict = {}
        self._ext_cache: dict = {}

    def word_degree(self, w) -> int:
        return sum(self.deg[g] for g in w)

    def elem_degree(self, key) -> int:
        mono, w = key
        return len(mono) + self.word_degree(w)

    def gen(self, g: int) -> dict:
        return {((), (g,)): ONE}

    def from_coords(self, coords: dict) -> dict:
        return {(mono, (g,)): c for (mono, g), c in coords.items() if c}

    def gen_times_word(self, g: int, w: tuple) -> dict:
        key = (g, w)
        hit = self._gw.get(key)
        if hit is not None:
            return hit
        res = self._gen_times_word(g, w)
        self._gw[key] = res
        return res

    def _gen_times_word(self, g: int, w: tuple) -> dict:
        if not w or g < w[0] or (g == w[0] and not self.odd(g)):
            nw = (g,) + w
            if len(nw) > self.cap:
                raise TruncationOverflow(f"enveloping weight {len(nw)} exceeds {self.cap}", weight=len(nw))
            return {((), nw): ONE}
        y, rest = w[0], w[1:]
        out: dict = {}
        if g == y:
            # odd square
            for (mono, h), c in self.pm.gen_bracket(g, g).items():
                vadd(out, lmul_ext({mono: ONE}, self.gen_times_word(h, rest)), HALF * c)
            return out
        s = -1 if (self.deg[g] * self.deg[y]) % 2 else 1
        vadd(out, self.gen_times_elem(y, self.gen_times_word(g, rest)), s)
        for (mono, h), c in self.pm.gen_bracket(g, y).items():
            vadd(out, lmul_ext({mono: ONE}, self.gen_times_word(h, rest)), c)
        return out

    def gen_times_elem(self, g: int, x: dict) -> dict:
        out: dict = {}
        dg = self.deg[g] % 2
        for (mono, w), c in x.items():
            s = -1 if (dg and len(mono) % 2) else 1
            vadd(out, lmul_ext({mono: ONE}, self.gen_times_word(g, w)), s * c)
            anc = self._anchor_mono(g, mono)
            for m2, c2 in anc.items():
                vaddterm(out, (m2, w), c * c2)
        return out

    def _anchor_mono(self, g, mono) -> dict:
        key = (g, mono)
        hit = self._ext_cache.get(key)
        if hit is None:
            hit = self.pm.anchor(g, {mono: ONE})
            self._ext_cache[key] = hit
        return hit

    def word_times_elem(self, w: tuple, x: dict) -> dict:
        for g in reversed(w):
            x = self.gen_times_elem(g, x)
        return x

    def multiply(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for (mono, w), c in x.items():
            vadd(out, lmul_ext({mono: ONE}, self.word_times_elem(w, y)), c)
        return out

    # the differential [s_i, −]
    def s_i(self) -> dict:
        return self.from_coords(self.pm.s_i_coords())

    def D_U(self, x: dict) -> dict:
        s = self.s_i()
        out = self.multiply(s, x)
        for key, c in x.items():
            sign = -1 if self.elem_degree(key) % 2 else 1
            vadd(out, self.multiply({key: c}, s), -sign)
        return out


class Nabla:
    """The connection ∇ on sections in frame coordinates.

        ∇_{G_a} G_b = Σ_c (∇^L_{x_a} x_b)^c G_c
        ∇_{G_a} τ_k = Σ_j (∇^A_{x_a} e_k)^j τ_j
        ∇_{τ_k} (−) = 0

    extended by ∇_{f s} = f ∇_s and ∇_s (f t) = X_s(f) t + (−1)^{|s||f|} f ∇_s t.
    """

    def __init__(self, pm: PullbackModule):
        self.pm = pm
        conn = pm.conn
        table: dict = {}
        for g in range(pm.ngen):
            a = pm.g_index_of_gen(g)
            if a is None:
                continue
            for h in range(pm.ngen):
                b = pm.g_index_of_gen(h)
                out: dict = {}
                if b is not None:
                    for c, v in conn.nabla_L({a: ONE}, {b: ONE}).items():
                        vaddterm(out, ((), pm.gen_of_g_index(c)), v)
                else:
                    k = h - pm.r - pm.m
                    for j, v in conn.nabla_A({a: ONE}, {k: ONE}).items():
                        vaddterm(out, ((), pm.tau(j)), v)
                if out:
                    table[(g, h)] = out
        self.table = table

    def gen(self, g: int, t: dict) -> dict:
        """∇_{g} t for a frame generator g and t in frame coordinates."""
        pm = self.pm
        dg = pm.gen_degree[g] % 2
        out: dict = {}
        for (mono, h), c in t.items():
            for m2, c2 in pm.anchor(g, {mono: ONE}).items():
                vaddterm(out, (m2, h), c * c2)
            s = -1 if (dg and len(mono) % 2) else 1
            for (m3, h2), c3 in self.table.get((g, h), {}).items():
                sg, mm = wedge_mono(mono, m3)
                if sg:
                    vaddterm(out, (mm, h2), s * sg * c * c3)
        return out

    def __call__(self, s: dict, t: dict) -> dict:
        out: dict = {}
        for (mono, g), c in s.items():
            term = self.gen(g, t)
            for (m2, h), c2 in term.items():
                sg, mm = wedge_mono(mono, m2)
                if sg:
                    vaddterm(out, (mm, h), sg * c * c2)
        return out


class PBWMap:
    """PBW : S → U by the symmetrizing recursion with the connection ∇."""

    def __init__(self, sym: SymAlgebra, uenv: UEnv):
        self.sym = sym
        self.uenv = uenv
        self.nabla = Nabla(sym.pm)
        self._cache: dict = {}

    def _nabla_word(self, g: int, w: tuple) -> dict:
        """∇_g extended as a derivation over the symmetric word w (degree |g|)."""
        sym = self.sym
        out: dict = {}
        odd_g = sym.odd(g)
        parity = 0
        for r, h in enumerate(w):
            img = self.nabla.gen(g, {((), h): ONE})
            if img:
                s = -1 if (odd_g and parity) else 1
                term = sym.multiply(sym.multiply(sym.word(w[:r]), sym.from_coords(img)), sym.word(w[r + 1:]))
                vadd(out, term, s)
            if sym.odd(h):
                parity ^= 1
        return out

    def word(self, w: tuple) -> dict:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        n = len(w)
        if n == 0:
            res = {((), ()): ONE}
        elif n == 1:
            res = {((), w): ONE}
        else:
            res = {}
            inv_n = Fraction(1, n)
            sym = self.sym
            parity = 0
            for i, g in enumerate(w):
                rest = w[:i] + w[i + 1:]
                s = -1 if (sym.odd(g) and parity) else 1
                vadd(res, self.uenv.gen_times_elem(g, self.word(rest)), s * inv_n)
                vadd(res, self(self._nabla_word(g, rest)), -s * inv_n)
                if sym.odd(g):
                    parity ^= 1
        self._cache[w] = res
        return res

    def __call__(self, x: dict) -> dict:
        out: dict = {}
        for (mono, w), c in x.items():
            vadd(out, lmul_ext({mono: ONE}, self.word(w)), c)
        return out


class EnvelopingData:
    """Everything living on the big side at truncation N for one pullback module."""

    def __init__(self, pm: PullbackModule, N: int, ula: ULA | None = None):
        self.pm = pm
        self.N = N
        self.uenv = UEnv(pm, N + 1)
        self.sym = SymAlgebra(pm, N)
        self.pbw_map = PBWMap(self.sym, self.uenv)
        self.ula = ula or ULA(pm.pair, N, pm.conn)
        # the big space: same labels for S and U
        self.space = GradedSpace(self.sym.space.labels, self.sym.space.degrees,
                                 self.sym.space.weights, name="U(π^!L)")

    def check_weight(self, x: dict, what: str) -> dict:
        for (mono, w) in x:
            if len(w) > self.N:
                raise TruncationOverflow(f"{what}: weight {len(w)} exceeds {self.N}", weight=len(w))
        return x

    def multiply(self, x: dict, y: dict) -> dict:
        return self.check_weight(self.uenv.multiply(x, y), "product")

    def D_U(self, x: dict) -> dict:
        return self.check_weight(self.uenv.D_U(x), "D_U")

    def P_U(self, x: dict) -> dict:
        """Λh^∨-linear projection to Λh^∨ ⊗ U_{L/A} in pbw coordinates."""
        r = self.pm.r
        out: dict = {}
        for (mono, w), c in x.items():
            if all(g < r for g in w):
                # σ-word: class of j(b_{l1})…j(b_{lk}), already sorted
                for label, c2 in self.ula.pbw_inv({tuple(w): ONE}).items():
                    vaddterm(out, (mono, label), c * c2)
        return out

    # matrices
    def op(self, fn, domain=None, codomain=None, shift=0) -> LinearOperator:
        dom = domain or self.space
        cod = codomain or self.space
        return LinearOperator.from_function(
            dom, cod, shift, lambda j: cod.to_indices(fn({dom.labels[j]: ONE})))

    def PBW_matrix(self) -> LinearOperator:
        return self.op(self.pbw_map)

    def D_U_matrix(self) -> LinearOperator:
        return self.op(self.D_U, shift=1)

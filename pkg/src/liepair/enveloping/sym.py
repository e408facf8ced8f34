"""Graded symmetric algebra of the section module over Λh^∨.

Elements are dicts (monomial, word) -> Fraction meaning ξ^monomial · w,
where w is a sorted tuple of frame generators with no repeated odd letter.
Includes D_S, the Poisson bracket and the symmetric-tensor contraction.
"""

from __future__ import annotations

from fractions import Fraction

from ..ce_complex import (
    CEComplex,
    SBModule,
    TruncationOverflow,
    apply_derivation,
    wedge_mono,
)
from ..graded_linear import ONE, GradedSpace, LinearOperator, vadd, vaddterm
from ..pullback import PullbackModule


def merge_words(u: tuple, v: tuple, odd) -> tuple:
    """Graded-commutative product of sorted words: (sign, word) or (0, None)."""
    if not u:
        return 1, v
    if not v:
        return 1, u
    sign = 1
    out = []
    i = j = 0
    # count odd pairs (x in u, y in v) with y < x: y jumps over x
    while i < len(u) and j < len(v):
        if v[j] < u[i]:
            if odd(v[j]):
                rem = sum(1 for x in u[i:] if odd(x))
                if rem % 2:
                    sign = -sign
            out.append(v[j])
            j += 1
        else:
            out.append(u[i])
            i += 1
    out.extend(u[i:])
    out.extend(v[j:])
    w = tuple(out)
    for a, b in zip(w, w[1:]):
        if a == b and odd(a):
            return 0, None
    return sign, w


def enumerate_words(ngen: int, odd, max_len: int) -> list[tuple]:
    """Sorted generator words up to max_len with odd letters not repeated."""
    words = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            start = w[-1] if w else 0
            for g in range(start, ngen):
                if w and g == w[-1] and odd(g):
                    continue
                nxt.append(w + (g,))
        words.extend(nxt)
        frontier = nxt
    return words


class SymAlgebra:
    def __init__(self, pm: PullbackModule, N: int):
        self.pm = pm
        self.N = N
        self.odd = lambda g: pm.gen_degree[g] % 2 == 1
        self.words = enumerate_words(pm.ngen, self.odd, N)
        labels, degs, weights = [], [], []
        for mono in pm.ext.basis:
            for w in self.words:
                labels.append((mono, w))
                degs.append(len(mono) + self.word_degree(w))
                weights.append(len(w))
        self.space = GradedSpace(tuple(labels), tuple(degs), tuple(weights), name="S(Γ)")
        self._H0 = {g: pm.decompose(pm.H0(pm.gens[g])) for g in range(pm.ngen)}

    def word_degree(self, w) -> int:
        d = self.pm.gen_degree
        return sum(d[g] for g in w)

    def word_parity(self, w) -> int:
        return sum(1 for g in w if self.odd(g)) % 2

    def gen(self, g: int) -> dict:
        return {((), (g,)): ONE}

    def from_coords(self, coords: dict) -> dict:
        """Frame coordinates (mono, g) -> weight-one element."""
        return {(mono, (g,)): c for (mono, g), c in coords.items() if c}

    def multiply(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for (m1, w1), a in x.items():
            p1 = self.word_parity(w1)
            for (m2, w2), b in y.items():
                if len(w1) + len(w2) > self.N:
                    raise TruncationOverflow(f"symmetric weight {len(w1) + len(w2)} exceeds {self.N}",
                                             weight=len(w1) + len(w2))
                s1, mono = wedge_mono(m1, m2)
                if not s1:
                    continue
                s2, w = merge_words(w1, w2, self.odd)
                if not s2:
                    continue
                s = s1 * s2 * (-1 if (p1 and len(m2) % 2) else 1)
                vaddterm(out, (mono, w), s * a * b)
        return out

    def word(self, w) -> dict:
        return {((), tuple(w)): ONE}

    def _apply_gen_derivation(self, x: dict, on_ext, on_gen, deg: int) -> dict:
        """Extend a degree-``deg`` derivation given on Λh^∨ and on generators."""
        out: dict = {}
        odd_d = deg % 2
        for (mono, w), c in x.items():
            if on_ext is not None:
                for m2, c2 in on_ext({mono: ONE}).items():
                    vaddterm(out, (m2, w), c * c2)
            sign0 = -1 if (odd_d and len(mono) % 2) else 1
            prefix_parity = 0
            for r, g in enumerate(w):
                img = on_gen(g)
                if img:
                    s = sign0 * (-1 if (odd_d and prefix_parity) else 1)
                    term = self.multiply(self.multiply(self.word(w[:r]), self.from_coords(img)),
                                         self.word(w[r + 1:]))
                    term = self.multiply({(mono, ()): ONE}, term)
                    vadd(out, term, s * c)
                if self.odd(g):
                    prefix_parity ^= 1
        return out

    def D_S(self, x: dict) -> dict:
        pm = self.pm
        return self._apply_gen_derivation(x, pm.ext.d, pm.Q_gen, 1)

    def h_prime(self, x: dict) -> dict:
        return self._apply_gen_derivation(x, None, lambda g: self._H0[g], -1)

    def c_count(self, w) -> int:
        pm = self.pm
        return sum(1 for g in w if g >= pm.r)

    def H_S(self, x: dict) -> dict:
        """Symmetrized homotopy: (1/q) times the derivation extension of H0,
        q = number of α/τ letters."""
        out: dict = {}
        for key, c in x.items():
            q = self.c_count(key[1])
            if q:
                vadd(out, self.h_prime({key: c}), Fraction(1, q))
        return out

    def poisson(self, x: dict, y: dict) -> dict:
        """Degree-0 Poisson bracket extending the section bracket and anchor."""
        out: dict = {}
        for kx, a in x.items():
            for ky, b in y.items():
                vadd(out, self._poisson_basis(kx, ky), a * b)
        return out

    def _atoms(self, key):
        mono, w = key
        return [("x", k) for k in mono] + [("g", g) for g in w]

    def _atom_elem(self, atom) -> dict:
        kind, i = atom
        return {((i,), ()): ONE} if kind == "x" else self.gen(i)

    def _atom_deg(self, atom) -> int:
        kind, i = atom
        return 1 if kind == "x" else self.pm.gen_degree[i]

    def _atom_bracket(self, a, b) -> dict:
        pm = self.pm
        if a[0] == "x" and b[0] == "x":
            return {}
        if a[0] == "g" and b[0] == "x":
            f = pm.anchor(a[1], {(b[1],): ONE})
            return {(mono, ()): c for mono, c in f.items()}
        if a[0] == "x" and b[0] == "g":
            da, db = self._atom_deg(a), self._atom_deg(b)
            s = -1 if (da * db) % 2 else 1
            return {k: -s * v for k, v in self._atom_bracket(b, a).items()}
        return self.from_coords(pm.gen_bracket(a[1], b[1]))

    def _product(self, atoms) -> dict:
        out = {((), ()): ONE}
        for at in atoms:
            out = self.multiply(out, self._atom_elem(at))
        return out

    def _poisson_basis(self, kx, ky) -> dict:
        ax = self._atoms(kx)
        ay = self._atoms(ky)
        out: dict = {}
        # {a1…ap, b1…bq} = Σ ± a1…â_i…ap-left-part {a_i, b_j} …
        for i, a in enumerate(ax):
            da = self._atom_deg(a)
            tail_deg = sum(self._atom_deg(t) for t in ax[i + 1:])
            # move a_i to the right end of x: sign (−1)^{|a| |tail|}
            s_a = -1 if (da * tail_deg) % 2 else 1
            for j, b in enumerate(ay):
                db = self._atom_deg(b)
                head_deg = sum(self._atom_deg(t) for t in ay[:j])
                # move b_j to the left end of y
                s_b = -1 if (db * head_deg) % 2 else 1
                br = self._atom_bracket(a, b)
                if not br:
                    continue
                left = self._product(ax[:i] + ax[i + 1:])
                right = self._product(ay[:j] + ay[j + 1:])
                term = self.multiply(self.multiply(left, br), right)
                vadd(out, term, s_a * s_b)
        return out

    # the symmetric contraction onto Λh^∨ ⊗ S(B)
    def small_complex(self) -> CEComplex:
        return CEComplex(self.pm.pair, SBModule(self.pm.pair, self.N), self.pm.ext)

    def P_S(self, x: dict) -> dict:
        r = self.pm.r
        out: dict = {}
        for (mono, w), c in x.items():
            if all(g < r for g in w):
                vaddterm(out, (mono, w), c)
        return out

    def I_S(self, y: dict) -> dict:
        return {(mono, tuple(b)): c for (mono, b), c in y.items() if c}

    def operator(self, fn, codomain=None, shift=0) -> LinearOperator:
        sp = self.space
        cod = codomain or sp
        return LinearOperator.from_function(
            sp, cod, shift, lambda j: cod.to_indices(fn({sp.labels[j]: ONE})))

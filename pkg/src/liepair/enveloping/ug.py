"""U(g) by normal ordering, the quotient U_{L/A} = U(g)/U(g)h and the pbw map.

U(g) elements are dicts word -> Fraction, words being tuples of g-indices
sorted by a configurable rank.  For the quotient we use the "B first"
order (complement letters before h letters), so that U(g)h is spanned by
the normal words containing any h letter.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..ce_complex import TruncationOverflow, sym_monomials
from ..graded_linear import ONE, GradedSpace, LinearOperator, invert, vadd, vaddterm
from ..lie_pair import ConnectionSet, LiePair, build_connections


class UG:
    """Universal enveloping algebra of g with PBW normal forms."""

    def __init__(self, pair: LiePair, order=None):
        self.pair = pair
        n = pair.dim_g
        order = list(range(n)) if order is None else list(order)
        if sorted(order) != list(range(n)):
            raise ValueError("order must be a permutation of the basis")
        self.rank = {a: pos for pos, a in enumerate(order)}
        self._nf = lru_cache(maxsize=None)(self._normal_form)

    @classmethod
    def b_first(cls, pair: LiePair) -> "UG":
        m, n = pair.dim_h, pair.dim_g
        return cls(pair, list(range(m, n)) + list(range(m)))

    def _normal_form(self, word: tuple):
        rank = self.rank
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if rank[a] > rank[b]:
                out = dict(self._nf(word[:i] + (b, a) + word[i + 2:]))
                for k, c in self.pair.bracket_basis(a, b).items():
                    vadd(out, self._nf(word[:i] + (k,) + word[i + 2:]), c)
                return out
        return {word: ONE}

    def normal_form(self, word) -> dict:
        return dict(self._nf(tuple(word)))

    def element_normal_form(self, x: dict) -> dict:
        out: dict = {}
        for w, c in x.items():
            vadd(out, self._nf(tuple(w)), c)
        return out

    def multiply(self, x: dict, y: dict, cap: int | None = None) -> dict:
        out: dict = {}
        for u, a in x.items():
            for v, b in y.items():
                if cap is not None and len(u) + len(v) > cap:
                    raise TruncationOverflow(f"product weight {len(u) + len(v)} exceeds {cap}",
                                             weight=len(u) + len(v))
                vadd(out, self._nf(tuple(u) + tuple(v)), a * b)
        return out

    def vector(self, v: dict) -> dict:
        """Degree-one element from a g-vector."""
        return {(a,): Fraction(c) for a, c in v.items() if c}


def ug_multiply(pair: LiePair, x: dict, y: dict, order=None, cap: int | None = None) -> dict:
    return UG(pair, order).multiply(x, y, cap)


class ULA:
    """U_{L/A} truncated at weight N, with class coordinates and pbw coordinates.

    Class coordinates: sorted words in complement letters, labelled by the
    tuple of B-indices.  pbw coordinates: S(B) monomials (same labels).
    """

    def __init__(self, pair: LiePair, N: int, conn: ConnectionSet | None = None):
        self.pair = pair
        self.N = N
        self.conn = conn or build_connections(pair)
        self.ug = UG.b_first(pair)
        m, r = pair.dim_h, pair.dim_b
        self.m, self.r = m, r
        self.labels = tuple(sym_monomials(r, N))
        self.pbw_labels = self.labels
        self.space = GradedSpace(self.labels, (0,) * len(self.labels),
                                 tuple(len(t) for t in self.labels), name="U_{L/A}")
        self._pbw = {}
        self._pbw_matrix = None
        self._pbw_inv = None
        self._act_h = {}

    # classes
    def project_class(self, x: dict) -> dict:
        """Class in U(g)/U(g)h of a U(g) element (any order)."""
        m = self.m
        out: dict = {}
        for w, c in self.ug.element_normal_form(x).items():
            if all(a >= m for a in w):
                vaddterm(out, tuple(a - m for a in w), c)
        return out

    def lift(self, label: tuple) -> dict:
        return {tuple(self.m + l for l in label): ONE}

    def act_class(self, v: dict, cls: dict) -> dict:
        """g-vector v acting on a class by left multiplication."""
        out: dict = {}
        left = self.ug.vector(v)
        for label, c in cls.items():
            prod = self.ug.multiply(left, self.lift(label))
            vadd(out, self.project_class(prod), c)
        return out

    # pbw
    def _nabla_B_sym(self, v: dict, mono: tuple) -> dict:
        """∇^B_v extended as a derivation of S(B)."""
        out: dict = {}
        for pos, l in enumerate(mono):
            rest = mono[:pos] + mono[pos + 1:]
            for l2, c in self.conn.nabla_B(v, {l: ONE}).items():
                vaddterm(out, tuple(sorted(rest + (l2,))), c)
        return out

    def pbw(self, mono: tuple) -> dict:
        """pbw of an S(B) monomial, in class coordinates."""
        mono = tuple(mono)
        if mono in self._pbw:
            return self._pbw[mono]
        n = len(mono)
        if n > self.N:
            raise TruncationOverflow(f"pbw weight {n} exceeds {self.N}", weight=n)
        if n == 0:
            res = {(): ONE}
        else:
            res: dict = {}
            inv_n = Fraction(1, n)
            for i, l in enumerate(mono):
                rest = mono[:i] + mono[i + 1:]
                jb = self.pair.j({l: ONE})
                vadd(res, self.act_class(jb, self.pbw(rest)), inv_n)
                for m2, c in self._nabla_B_sym(jb, rest).items():
                    vadd(res, self.pbw(m2), -inv_n * c)
        self._pbw[mono] = res
        return res

    def pbw_element(self, x: dict) -> dict:
        out: dict = {}
        for mono, c in x.items():
            vadd(out, self.pbw(mono), c)
        return out

    def pbw_matrix(self) -> LinearOperator:
        if self._pbw_matrix is None:
            sp = self.space
            self._pbw_matrix = LinearOperator.from_function(
                sp, sp, 0, lambda j: sp.to_indices(self.pbw(sp.labels[j])))
        return self._pbw_matrix

    def pbw_inverse_matrix(self) -> LinearOperator:
        if self._pbw_inv is None:
            self._pbw_inv = invert(self.pbw_matrix())
        return self._pbw_inv

    def pbw_inv(self, cls: dict) -> dict:
        sp = self.space
        return sp.to_labels(self.pbw_inverse_matrix().apply(sp.to_indices(cls)))

    def project_ULA(self, x: dict) -> dict:
        """U(g) element -> pbw coordinates of its class."""
        return self.pbw_inv(self.project_class(x))

    def act_h(self, k: int, label: tuple) -> dict:
        """e_k acting on a pbw basis element, result in pbw coordinates."""
        key = (k, label)
        if key not in self._act_h:
            cls = self.act_class({k: ONE}, self.pbw(label))
            self._act_h[key] = self.pbw_inv(cls)
        return self._act_h[key]

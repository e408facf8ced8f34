"""Lie pairs over a point.

A pair is a Lie algebra g with a subalgebra h.  We always work in a basis
x_0..x_{n-1} of g whose first ``dim_h`` vectors span h and whose remaining
vectors span the chosen complement j(B).  With that convention the maps
i, p, j, q are coordinate inclusions/projections:

    i(e_k) = x_k,        p(x_k) = e_k    (k < m)
    j(b_l) = x_{m+l},    q(x_{m+l}) = b_l

Vectors are sparse dicts index -> Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .graded_linear import (
    ONE,
    ZERO,
    InvalidInput,
    LinearOperator,
    GradedSpace,
    invert,
    vadd,
    vaddterm,
    vscale,
)


@dataclass(frozen=True)
class LiePair:
    dim_g: int
    dim_h: int
    # (i, j) -> {k: c^k_ij}; stored exactly as supplied
    brackets: dict = field(hash=False, compare=False)
    name: str = ""

    def __post_init__(self):
        if self.dim_g < 0 or self.dim_h < 0:
            raise InvalidInput("dimensions must be non-negative")
        if self.dim_h > self.dim_g:
            raise InvalidInput(f"dim_h = {self.dim_h} exceeds dim_g = {self.dim_g}")
        clean = {}
        for (i, j), col in self.brackets.items():
            for k in col:
                if not (0 <= i < self.dim_g and 0 <= j < self.dim_g and 0 <= k < self.dim_g):
                    raise InvalidInput(f"bracket index out of range: ({i}, {j}) -> {k}")
            col = {k: Fraction(v) for k, v in col.items() if v}
            if col:
                clean[(i, j)] = col
        object.__setattr__(self, "brackets", clean)

    @property
    def dim_b(self) -> int:
        return self.dim_g - self.dim_h

    def key(self):
        """Hashable content fingerprint."""
        items = tuple(sorted((ij, tuple(sorted(col.items()))) for ij, col in self.brackets.items()))
        return (self.dim_g, self.dim_h, items)

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.brackets.get((i, j), {}).get(k, ZERO)

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.brackets.get((i, j), {})

    def bracket(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                col = self.brackets.get((i, j))
                if col:
                    vadd(out, col, a * b)
        return out

    # coordinate maps
    def i(self, a: dict) -> dict:
        return dict(a)

    def p(self, v: dict) -> dict:
        m = self.dim_h
        return {k: c for k, c in v.items() if k < m}

    def j(self, b: dict) -> dict:
        m = self.dim_h
        return {m + l: c for l, c in b.items()}

    def q(self, v: dict) -> dict:
        m = self.dim_h
        return {k - m: c for k, c in v.items() if k >= m}

    def is_h_index(self, a: int) -> bool:
        return a < self.dim_h

    def h_subpair(self) -> "LiePair":
        """h as a Lie algebra on its own (h = g)."""
        m = self.dim_h
        br = {}
        for (i, j), col in self.brackets.items():
            if i < m and j < m:
                sub = {k: v for k, v in col.items() if k < m}
                if sub:
                    br[(i, j)] = sub
        return LiePair(m, m, br, name=f"{self.name}:h")


@dataclass
class ValidationReport:
    antisymmetry: list = field(default_factory=list)
    jacobi: list = field(default_factory=list)
    closure: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.antisymmetry or self.jacobi or self.closure)

    def to_dict(self) -> dict:
        from .io import render

        return {
            "valid": self.valid,
            "antisymmetry": render(self.antisymmetry),
            "jacobi": render(self.jacobi),
            "closure": render(self.closure),
        }


def validate_lie_pair(pair: LiePair) -> ValidationReport:
    """Check antisymmetry, Jacobi and [h, h] ⊆ h; witnesses are 0-based."""
    rep = ValidationReport()
    n, m = pair.dim_g, pair.dim_h
    for i in range(n):
        for j in range(i, n):
            s = vadd(dict(pair.bracket_basis(i, j)), pair.bracket_basis(j, i))
            for k, v in sorted(s.items()):
                rep.antisymmetry.append({"i": i, "j": j, "k": k, "defect": v})
    for a, b, c in combinations(range(n), 3):
        acc: dict = {}
        ea, eb, ec = {a: ONE}, {b: ONE}, {c: ONE}
        vadd(acc, pair.bracket(ea, pair.bracket(eb, ec)))
        vadd(acc, pair.bracket(eb, pair.bracket(ec, ea)))
        vadd(acc, pair.bracket(ec, pair.bracket(ea, eb)))
        if acc:
            rep.jacobi.append({"triple": [a, b, c], "defect": dict(sorted(acc.items()))})
    for i in range(m):
        for j in range(m):
            bad = {k: v for k, v in pair.bracket_basis(i, j).items() if k >= m}
            if bad:
                rep.closure.append({"i": i, "j": j, "outside": dict(sorted(bad.items()))})
    return rep


def require_valid(pair: LiePair) -> None:
    rep = validate_lie_pair(pair)
    if not rep.valid:
        raise InvalidInput(f"invalid Lie pair {pair.name!r}: {rep.to_dict()}")


def bott(pair: LiePair, a: dict, b: dict) -> dict:
    """q[i(a), j(b)]."""
    return pair.q(pair.bracket(pair.i(a), pair.j(b)))


def delta(pair: LiePair, b: dict, a: dict) -> dict:
    """Δ_b a = p[j(b), i(a)]."""
    return pair.p(pair.bracket(pair.j(b), pair.i(a)))


# ---------------------------------------------------------------------------
# connections

@dataclass(frozen=True)
class ConnectionSet:
    """Coefficient tables of the connections over a point.

    ``aux[(a, b)]`` = ∇'_{x_a} x_b (g-vector),
    ``L[(a, b)]``  = ∇^L_{x_a} x_b (g-vector),
    ``A[(a, k)]``  = ∇^A_{x_a} e_k (h-vector),
    ``B[(a, l)]``  = ∇^B_{x_a} b_l (B-vector).
    """

    pair: LiePair
    aux: dict
    L: dict
    A: dict
    B: dict

    def nabla_L(self, X: dict, Y: dict) -> dict:
        out: dict = {}
        for a, u in X.items():
            for b, v in Y.items():
                vadd(out, self.L.get((a, b), {}), u * v)
        return out

    def nabla_A(self, X: dict, a_vec: dict) -> dict:
        out: dict = {}
        for a, u in X.items():
            for k, v in a_vec.items():
                vadd(out, self.A.get((a, k), {}), u * v)
        return out

    def nabla_B(self, X: dict, b_vec: dict) -> dict:
        out: dict = {}
        for a, u in X.items():
            for l, v in b_vec.items():
                vadd(out, self.B.get((a, l), {}), u * v)
        return out

    def check_identities(self) -> list:
        """Failures of the four compatibility identities on basis elements."""
        pair = self.pair
        n, m, r = pair.dim_g, pair.dim_h, pair.dim_b
        bad = []
        for a in range(n):
            X = {a: ONE}
            for k in range(m):
                lhs = self.nabla_L(X, pair.i({k: ONE}))
                rhs = pair.i(self.nabla_A(X, {k: ONE}))
                if lhs != rhs:
                    bad.append(("L(i a) = i(A a)", a, k))
            for l in range(r):
                lhs = self.nabla_L(X, pair.j({l: ONE}))
                rhs = pair.j(self.nabla_B(X, {l: ONE}))
                if lhs != rhs:
                    bad.append(("L(j b) = j(B b)", a, l))
        for l in range(r):
            for k in range(m):
                if self.nabla_A(pair.j({l: ONE}), {k: ONE}) != delta(pair, {l: ONE}, {k: ONE}):
                    bad.append(("A_{j b} a = Δ_b a", l, k))
        for k in range(m):
            for l in range(r):
                if self.nabla_B(pair.i({k: ONE}), {l: ONE}) != bott(pair, {k: ONE}, {l: ONE}):
                    bad.append(("B_{i a} b = Bott", k, l))
        return bad


def build_connections(pair: LiePair, aux: dict | None = None) -> ConnectionSet:
    """Connections ∇^L, ∇^A, ∇^B induced by an auxiliary connection ∇'.

        ∇^L_X Y = ip(∇'_{ipX} ipY + [jqX, ipY]) + jq(∇'_{jqX} jqY + [ipX, jqY])
        ∇^A_X a = p(∇'_{ipX} i a + [jqX, i a])
        ∇^B_X b = q(∇'_{jqX} j b + [ipX, j b])

    Over a point ∇' is an arbitrary bilinear map g × g → g.
    """
    aux = {k: {c: Fraction(v) for c, v in col.items() if v} for k, col in (aux or {}).items()}
    n, m, r = pair.dim_g, pair.dim_h, pair.dim_b

    def aux_apply(X: dict, Y: dict) -> dict:
        out: dict = {}
        for a, u in X.items():
            for b, v in Y.items():
                vadd(out, aux.get((a, b), {}), u * v)
        return out

    def ip(v):
        return pair.i(pair.p(v))

    def jq(v):
        return pair.j(pair.q(v))

    L, A, B = {}, {}, {}
    for a in range(n):
        X = {a: ONE}
        for b in range(n):
            Y = {b: ONE}
            t1 = vadd(aux_apply(ip(X), ip(Y)), pair.bracket(jq(X), ip(Y)))
            t2 = vadd(aux_apply(jq(X), jq(Y)), pair.bracket(ip(X), jq(Y)))
            val = vadd(ip(t1), jq(t2))
            if val:
                L[(a, b)] = val
        for k in range(m):
            ia = pair.i({k: ONE})
            val = pair.p(vadd(aux_apply(ip(X), ia), pair.bracket(jq(X), ia)))
            if val:
                A[(a, k)] = val
        for l in range(r):
            jb = pair.j({l: ONE})
            val = pair.q(vadd(aux_apply(jq(X), jb), pair.bracket(ip(X), jb)))
            if val:
                B[(a, l)] = val
    return ConnectionSet(pair, aux, L, A, B)


# ---------------------------------------------------------------------------
# choices: splitting and auxiliary connection

@dataclass(frozen=True)
class Choices:
    """A splitting (change of basis fixing h pointwise) plus an aux connection.

    ``splitting`` lists the new basis vectors as columns in document
    coordinates (``splitting[row][col]``); None means the document basis.
    ``aux`` is given in document coordinates: (a, b) -> {c: coeff}.
    """

    splitting: tuple | None = None
    aux: dict | None = field(default=None, hash=False, compare=False)
    label: str = ""

    def key(self):
        aux = tuple(sorted((k, tuple(sorted(v.items()))) for k, v in (self.aux or {}).items()))
        return (self.splitting, aux)


def _matrix_operator(n: int, cols: list[dict]) -> LinearOperator:
    sp = GradedSpace(tuple(range(n)), (0,) * n, name=f"k^{n}")
    return LinearOperator(sp, sp, 0, cols)


def splitting_operator(pair: LiePair, choices: Choices) -> LinearOperator:
    """Columns = new basis vectors in document coordinates."""
    n, m = pair.dim_g, pair.dim_h
    if choices.splitting is None:
        return _matrix_operator(n, [{j: ONE} for j in range(n)])
    rows = choices.splitting
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InvalidInput(f"splitting matrix must be {n}x{n}")
    cols = []
    for c in range(n):
        cols.append({r: Fraction(rows[r][c]) for r in range(n) if rows[r][c]})
    for c in range(m):
        if cols[c] != {c: ONE}:
            raise InvalidInput("splitting matrix must fix the subalgebra basis (first columns = unit vectors)")
    op = _matrix_operator(n, cols)
    try:
        invert(op)
    except InvalidInput:
        raise InvalidInput("splitting matrix is singular") from None
    return op


def apply_choices(pair: LiePair, choices: Choices):
    """Re-express the pair and aux connection in the basis given by the splitting.

    Returns (new_pair, aux_in_new_basis, S) with S the splitting operator.
    """
    S = splitting_operator(pair, choices)
    Sinv = invert(S)
    n = pair.dim_g
    br = {}
    for a in range(n):
        for b in range(n):
            v = Sinv.apply(pair.bracket(S.cols[a], S.cols[b]))
            if v:
                br[(a, b)] = v
    new_pair = LiePair(n, pair.dim_h, br, name=pair.name)
    aux_doc = {k: {c: Fraction(v) for c, v in col.items()} for k, col in (choices.aux or {}).items()}
    aux_new = {}
    for a in range(n):
        for b in range(n):
            acc: dict = {}
            for pa, u in S.cols[a].items():
                for pb, v in S.cols[b].items():
                    vadd(acc, aux_doc.get((pa, pb), {}), u * v)
            acc = Sinv.apply(acc)
            if acc:
                aux_new[(a, b)] = acc
    return new_pair, aux_new, S


def structure_tensor_products(pair: LiePair):
    """All nonzero (i, j, k, c) in index order; convenient for reports."""
    out = []
    for (i, j) in sorted(pair.brackets):
        for k, v in sorted(pair.brackets[(i, j)].items()):
            out.append((i, j, k, v))
    return out


def antisymmetrized(dim_g: int, entries) -> dict:
    """Bracket table from entries (i, j, k, c) meaning [x_i, x_j] ∋ c x_k, filled antisymmetrically."""
    br: dict = {}
    for i, j, k, c in entries:
        c = Fraction(c)
        vaddterm(br.setdefault((i, j), {}), k, c)
        vaddterm(br.setdefault((j, i), {}), k, -c)
    return {ij: col for ij, col in br.items() if col}


def literal(entries) -> dict:
    br: dict = {}
    for i, j, k, c in entries:
        vaddterm(br.setdefault((i, j), {}), k, Fraction(c))
    return {ij: col for ij, col in br.items() if col}


def scale_vec(v: dict, c) -> dict:
    return vscale(v, c)

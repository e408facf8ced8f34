"""Exact rational linear algebra on finite-dimensional graded spaces.

Vectors are sparse ``dict`` objects mapping a basis index (or a basis label,
for the algebra-level code) to a nonzero :class:`fractions.Fraction`.
Everything here is exact; there is no floating point anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

Scalar = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class InvalidInput(ValueError):
    pass


class NotAComplex(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def Q(x) -> Fraction:
    """Parse an exact rational from an int, Fraction or a ``"p/q"`` string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    raise InvalidInput(f"not an exact rational: {x!r}")


def qstr(x: Fraction) -> str:
    """Canonical ``"p/q"`` rendering (denominator always present)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# sparse vectors

def vadd(acc: dict, vec: Mapping, scale=ONE) -> dict:
    """acc += scale * vec, in place; zero entries are removed."""
    if not scale:
        return acc
    for k, v in vec.items():
        c = acc.get(k, ZERO) + scale * v
        if c:
            acc[k] = c
        else:
            acc.pop(k, None)
    return acc


def vaddterm(acc: dict, key, c) -> None:
    if not c:
        return
    c = acc.get(key, ZERO) + c
    if c:
        acc[key] = c
    else:
        del acc[key]


def vscale(vec: Mapping, scale) -> dict:
    if not scale:
        return {}
    return {k: scale * v for k, v in vec.items()}


def vsub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    return vadd(out, b, -ONE)


def vmax_abs(vec: Mapping) -> Fraction:
    return max((abs(v) for v in vec.values()), default=ZERO)


# ---------------------------------------------------------------------------
# signs

def koszul_sign(degrees: Sequence[int], permutation: Sequence[int]) -> int:
    """Sign of reordering graded elements.

    ``permutation[i]`` is the original position of the element that ends up
    in position ``i``.  Returns (-1)^k with k the number of pairs of odd
    elements whose relative order is reversed.
    """
    n = len(degrees)
    if len(permutation) != n or sorted(permutation) != list(range(n)):
        raise InvalidInput(f"not a permutation of range({n}): {list(permutation)}")
    k = 0
    for a in range(n):
        pa = permutation[a]
        if degrees[pa] % 2 == 0:
            continue
        for b in range(a + 1, n):
            pb = permutation[b]
            if pb < pa and degrees[pb] % 2:
                k += 1
    return -1 if k % 2 else 1


def sort_with_sign(items: Sequence, odd: Callable[[object], bool], key=None):
    """Stable sort of graded symbols, returning (sign, sorted tuple).

    The sign counts transpositions of odd symbols (insertion sort).
    """
    key = key or (lambda x: x)
    seq = list(items)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and key(seq[j - 1]) > key(seq[j]):
            if odd(seq[j - 1]) and odd(seq[j]):
                sign = -sign
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    return sign, tuple(seq)


# ---------------------------------------------------------------------------
# graded spaces and operators

@dataclass(frozen=True)
class GradedSpace:
    """Finite graded space with structured (hashable) basis labels."""

    labels: tuple
    degrees: tuple
    weights: tuple = ()
    name: str = ""
    index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise InvalidInput("labels and degrees differ in length")
        idx = {lab: i for i, lab in enumerate(self.labels)}
        if len(idx) != len(self.labels):
            raise InvalidInput("basis labels are not unique")
        if not self.weights:
            object.__setattr__(self, "weights", (0,) * len(self.labels))
        object.__setattr__(self, "index", idx)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def degree_of(self, label) -> int:
        return self.degrees[self.index[label]]

    def indices_in_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    def to_indices(self, vec: Mapping) -> dict:
        """Label-keyed vector -> index-keyed vector."""
        idx = self.index
        try:
            return {idx[k]: v for k, v in vec.items() if v}
        except KeyError as exc:
            raise InvalidInput(f"label {exc.args[0]!r} not in space {self.name}") from None

    def to_labels(self, vec: Mapping) -> dict:
        labs = self.labels
        return {labs[i]: v for i, v in vec.items()}

    def element(self, vec: Mapping) -> "GradedElement":
        return GradedElement(self, self.to_indices(vec))


@dataclass(frozen=True)
class GradedElement:
    space: GradedSpace
    coeffs: dict

    def __post_init__(self):
        for i, v in self.coeffs.items():
            if not v:
                raise InvalidInput("zero coefficient stored")
            if not 0 <= i < self.space.dim:
                raise InvalidInput(f"index {i} outside space")

    def labelled(self) -> dict:
        return self.space.to_labels(self.coeffs)


class LinearOperator:
    """Sparse column-stored linear map between graded spaces.

    ``cols[j]`` is the image of the j-th domain basis vector as an
    index-keyed dict.  Instances are treated as immutable.
    """

    __slots__ = ("domain", "codomain", "shift", "cols")

    def __init__(self, domain: GradedSpace, codomain: GradedSpace, shift: int, cols):
        cols = [dict(c) for c in cols]
        if len(cols) != domain.dim:
            raise InvalidInput("column count does not match domain dimension")
        self.domain = domain
        self.codomain = codomain
        self.shift = shift
        self.cols = cols

    @classmethod
    def from_function(cls, domain, codomain, shift, fn: Callable[[int], Mapping]):
        return cls(domain, codomain, shift, [fn(j) for j in range(domain.dim)])

    @classmethod
    def identity(cls, space: GradedSpace) -> "LinearOperator":
        return cls(space, space, 0, [{j: ONE} for j in range(space.dim)])

    @classmethod
    def zero(cls, domain, codomain, shift=0) -> "LinearOperator":
        return cls(domain, codomain, shift, [{} for _ in range(domain.dim)])

    def check_degrees(self) -> list:
        """Entries violating target degree = source degree + shift."""
        bad = []
        for j, col in enumerate(self.cols):
            want = self.domain.degrees[j] + self.shift
            for i in col:
                if self.codomain.degrees[i] != want:
                    bad.append((j, i))
        return bad

    def apply(self, vec: Mapping) -> dict:
        out: dict = {}
        cols = self.cols
        for j, c in vec.items():
            vadd(out, cols[j], c)
        return out

    def __call__(self, vec: Mapping) -> dict:
        return self.apply(vec)

    def compose(self, g: "LinearOperator") -> "LinearOperator":
        """self ∘ g."""
        return operator_compose(self, g)

    def __matmul__(self, g):
        return operator_compose(self, g)

    def _combine(self, other: "LinearOperator", sign) -> "LinearOperator":
        if other.domain != self.domain or other.codomain != self.codomain:
            raise InvalidInput("operator spaces differ")
        cols = [vadd(dict(a), b, sign) for a, b in zip(self.cols, other.cols)]
        shift = self.shift
        if self.is_zero():
            shift = other.shift
        return LinearOperator(self.domain, self.codomain, shift, cols)

    def __add__(self, other):
        return self._combine(other, ONE)

    def __sub__(self, other):
        return self._combine(other, -ONE)

    def __neg__(self):
        return self.scaled(-ONE)

    def scaled(self, c) -> "LinearOperator":
        return LinearOperator(self.domain, self.codomain, self.shift,
                              [vscale(col, c) for col in self.cols])

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.cols == other.cols)

    __hash__ = None

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def dense(self) -> list[list[Fraction]]:
        rows = [[ZERO] * self.domain.dim for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def first_nonzero_column(self):
        for j, col in enumerate(self.cols):
            if col:
                return j
        return None

    def restrict(self, domain_idx: Sequence[int]) -> list[dict]:
        return [self.cols[j] for j in domain_idx]


def operator_compose(f: LinearOperator, g: LinearOperator) -> LinearOperator:
    """f ∘ g; shifts add."""
    if g.codomain != f.domain:
        raise InvalidInput(
            f"cannot compose: codomain {g.codomain.name!r} != domain {f.domain.name!r}")
    cols = [f.apply(col) for col in g.cols]
    return LinearOperator(g.domain, f.codomain, f.shift + g.shift, cols)


def max_entry(op: LinearOperator) -> Fraction:
    return max((abs(v) for col in op.cols for v in col.values()), default=ZERO)


# ---------------------------------------------------------------------------
# row reduction

def rref(rows: list[dict], ncols: int | None = None):
    """Reduced row echelon form of sparse rows (dict col -> value).

    Returns (reduced_rows, pivots) with pivots[i] the pivot column of row i.
    Columns are processed in increasing order, so the result is canonical.
    """
    work = [dict(r) for r in rows if r]
    pivots: list = []
    out: list[dict] = []
    while work:
        # row with smallest leading column
        best = min(range(len(work)), key=lambda i: min(work[i]))
        row = work.pop(best)
        col = min(row)
        inv = ONE / row[col]
        row = {k: v * inv for k, v in row.items()}
        rest = []
        for r in work:
            c = r.get(col)
            if c:
                vadd(r, row, -c)
            if r:
                rest.append(r)
        work = rest
        for r in out:
            c = r.get(col)
            if c:
                vadd(r, row, -c)
        out.append(row)
        pivots.append(col)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order], [pivots[i] for i in order]


def rank(vectors: Iterable[Mapping]) -> int:
    return len(rref(list(vectors))[0])


def kernel(cols: Sequence[Mapping], ncols: int) -> list[dict]:
    """Basis of the kernel of the matrix with the given sparse columns.

    Returned vectors are keyed by column index.
    """
    rows: dict = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    red, piv = rref(list(rows.values()))
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = {free: ONE}
        for r, p in zip(red, piv):
            c = r.get(free)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


def solve_in_span(basis: Sequence[Mapping], target: Mapping):
    """Coefficients c with Σ c_i basis_i = target, or None if impossible."""
    # augmented system: columns = basis vectors, unknowns indexed by position
    aug_rows: dict = {}
    for j, vec in enumerate(basis):
        for i, v in vec.items():
            aug_rows.setdefault(i, {})[j] = v
    for i, v in target.items():
        aug_rows.setdefault(i, {})["rhs"] = v
    n = len(basis)
    rows = []
    for r in aug_rows.values():
        rows.append({(k if k != "rhs" else n): v for k, v in r.items()})
    red, piv = rref(rows)
    if n in piv:
        return None
    sol = {}
    for r, p in zip(red, piv):
        c = r.get(n)
        if c:
            sol[p] = c
    return sol


def invert(op: LinearOperator) -> LinearOperator:
    """Inverse of a square operator; raises InvalidInput if singular."""
    n = op.domain.dim
    if op.codomain.dim != n:
        raise InvalidInput("non-square operator")
    rows: dict = {i: {} for i in range(n)}
    for j, col in enumerate(op.cols):
        for i, v in col.items():
            rows[i][j] = v
    for i in range(n):
        rows[i][n + i] = ONE
    red, piv = rref([rows[i] for i in range(n)])
    if len(piv) < n or piv[n - 1] >= n:
        raise InvalidInput("operator is not invertible")
    inv_cols = [dict() for _ in range(n)]
    for r, p in zip(red, piv):
        for k, v in r.items():
            if k >= n:
                inv_cols[k - n][p] = v
    return LinearOperator(op.codomain, op.domain, -op.shift, inv_cols)


def is_invertible(op: LinearOperator) -> bool:
    if op.domain.dim != op.codomain.dim:
        return False
    return rank(op.cols) == op.domain.dim


# ---------------------------------------------------------------------------
# cohomology

@dataclass
class Cohomology:
    """Cohomology of a finite complex, one entry per degree."""

    space: GradedSpace
    representatives: dict  # degree -> list of index-keyed cocycles
    _cocycle_basis: dict
    _boundary_basis: dict

    def rank(self, d: int) -> int:
        return len(self.representatives.get(d, []))

    def ranks(self) -> dict:
        return {d: len(v) for d, v in sorted(self.representatives.items())}

    def project(self, cocycle: Mapping, d: int) -> dict:
        """Coordinates of a cocycle's class in the chosen representatives."""
        reps = self.representatives.get(d, [])
        bnds = self._boundary_basis.get(d, [])
        sol = solve_in_span(list(reps) + list(bnds), cocycle)
        if sol is None:
            raise InvalidInput("vector is not a cocycle in this degree")
        return {i: c for i, c in sol.items() if i < len(reps)}


def complex_cohomology(differential: LinearOperator, degrees: Iterable[int] | None = None) -> Cohomology:
    """Representatives of H(V, d) for each degree in the window.

    The differential must be an endomorphism of degree +1 squaring to zero.
    """
    space = differential.domain
    if differential.codomain != space:
        raise InvalidInput("differential must be an endomorphism")
    for j, col in enumerate(differential.cols):
        dd = differential.apply(col)
        if dd:
            raise NotAComplex(f"d∘d ≠ 0 on basis vector {space.labels[j]!r}",
                              witness=space.labels[j])
    if degrees is None:
        degrees = sorted(set(space.degrees))
    reps: dict = {}
    zbasis: dict = {}
    bbasis: dict = {}
    for d in degrees:
        idx = space.indices_in_degree(d)
        cols = [differential.cols[j] for j in idx]
        ker_local = kernel(cols, len(idx))
        cocycles = [{idx[k]: v for k, v in vec.items()} for vec in ker_local]
        prev = space.indices_in_degree(d - 1)
        boundaries_raw = [differential.cols[j] for j in prev]
        bred, _ = rref(boundaries_raw)
        chosen: list[dict] = []
        span = list(bred)
        cur_rank = len(span)
        for z in cocycles:
            trial = span + [z]
            r = rank(trial)
            if r > cur_rank:
                chosen.append(z)
                span = trial
                cur_rank = r
        reps[d] = chosen
        zbasis[d] = cocycles
        bbasis[d] = bred
    return Cohomology(space, reps, zbasis, bbasis)

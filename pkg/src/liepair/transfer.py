"""Homotopy transfer of the associative product along a contraction.

Internally everything is done on the suspension, where every structure map
has degree +1 (b_n) or 0 (morphism components) and signs are pure Koszul
signs.  With |sx| = |x| − 1:

    b_1 = d,   b_2(sx, sy) = (−1)^{|x|} s(xy),
    η_1 = i,   η_n = −h λ_n,   λ_n = Σ_{k+l=n} b_2(η_k ⊗ η_l),
    b'_n = p λ_n  (n ≥ 2),     𝕀_n = η_n.

The unsuspended products are m_n = s^{-1} b_n s^{⊗n}, i.e.
m_n(x_1..x_n) = (−1)^{Σ_i (n−i)|x_i|} b_n(x_1..x_n) on coordinates.  With
this the Stasheff identities read Σ (−1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0.

The projection morphism ℙ comes from perturbing the tensor-trick
contraction of the bar construction: ℙ_n = p (−B_2 H_T)^{n−1}, with
H_T = Σ_i (ip)^{⊗(i−1)} ⊗ h ⊗ 1 and B_2 the coderivation of b_2.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .ce_complex import TruncationOverflow
from .graded_linear import ONE, ZERO, GradedSpace, LinearOperator, vadd, vaddterm
from .hpl import Contraction


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def compositions(n: int, k: int):
    """Ordered tuples of k positive integers summing to n."""
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def suspension_sign(degrees) -> int:
    """(−1)^{Σ_i (n−i)|x_i|} relating m_n to b_n (1-based i)."""
    n = len(degrees)
    return _sgn(sum((n - 1 - i) * d for i, d in enumerate(degrees)))


class BigAlgebra:
    """Index-level product on the big space with cached basis products."""

    def __init__(self, space: GradedSpace, multiply_labels):
        self.space = space
        self._mul = multiply_labels
        self._cache: dict = {}

    def basis_product(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._cache.get(key)
        if hit is None:
            sp = self.space
            hit = sp.to_indices(self._mul({sp.labels[i]: ONE}, {sp.labels[j]: ONE}))
            self._cache[key] = hit
        return hit

    def multiply(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                vadd(out, self.basis_product(i, j), a * b)
        return out

    def degree(self, x: dict):
        degs = {self.space.degrees[i] for i in x}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop() if degs else None


class AInftyStructure:
    """Transferred A∞ structure on the small space of a contraction.

    Operations are evaluated lazily on basis tuples and cached; inputs whose
    total filtration weight exceeds the cap are rejected.
    """

    def __init__(self, contraction: Contraction, algebra: BigAlgebra, weight_cap: int, arity_cap: int = 4):
        self.c = contraction
        self.alg = algebra
        self.V = contraction.small
        self.W = contraction.big
        self.weight_cap = weight_cap
        self.arity_cap = arity_cap
        self._eta: dict = {}
        self._lam: dict = {}
        self._b: dict = {}
        self._ip = contraction.I @ contraction.P

    # bookkeeping
    def weight(self, t) -> int:
        w = self.V.weights
        return sum(w[i] for i in t)

    def degrees(self, t):
        d = self.V.degrees
        return [d[i] for i in t]

    def admissible(self, t) -> bool:
        return self.weight(t) <= self.weight_cap

    def _check(self, t):
        if not self.admissible(t):
            raise TruncationOverflow(f"input weight {self.weight(t)} exceeds {self.weight_cap}",
                                     weight=self.weight(t))

    # tree recursion on the suspension
    def eta(self, t: tuple) -> dict:
        hit = self._eta.get(t)
        if hit is not None:
            return hit
        if len(t) == 1:
            res = dict(self.c.I.cols[t[0]])
        else:
            res = {k: -v for k, v in self.c.H.apply(self.lam(t)).items()}
        self._eta[t] = res
        return res

    def lam(self, t: tuple) -> dict:
        hit = self._lam.get(t)
        if hit is not None:
            return hit
        degs = self.degrees(t)
        out: dict = {}
        for k in range(1, len(t)):
            left = self.eta(t[:k])
            if not left:
                continue
            right = self.eta(t[k:])
            if not right:
                continue
            # b_2(sy, sz) = (−1)^{|y|} s(yz); |y| = Σ|x_j| − k + 1
            s = _sgn(sum(degs[:k]) - k + 1)
            vadd(out, self.alg.multiply(left, right), s)
        self._lam[t] = out
        return out

    def b(self, t: tuple) -> dict:
        """Suspended structure map b_n on a basis tuple (coordinates on V)."""
        t = tuple(t)
        hit = self._b.get(t)
        if hit is not None:
            return hit
        self._check(t)
        if len(t) == 1:
            res = dict(self.c.d.cols[t[0]])
        else:
            res = self.c.P.apply(self.lam(t))
        self._b[t] = res
        return res

    def m(self, t: tuple) -> dict:
        """Unsuspended m_n on a basis tuple."""
        s = suspension_sign(self.degrees(t))
        res = self.b(t)
        return res if s == 1 else {k: -v for k, v in res.items()}

    def m_multi(self, vectors) -> dict:
        """m_n on arbitrary vectors (index-keyed dicts), multilinearly."""
        out: dict = {}
        for combo in itertools.product(*[list(v.items()) for v in vectors]):
            t = tuple(i for i, _ in combo)
            c = ONE
            for _, a in combo:
                c *= a
            if not self.admissible(t):
                raise TruncationOverflow("product leaves the truncation", weight=self.weight(t))
            vadd(out, self.m(t), c)
        return out

    def infinity_inclusion(self, t: tuple) -> dict:
        """Suspended 𝕀_n on a basis tuple (big-space coordinates)."""
        self._check(t)
        return self.eta(tuple(t))

    def tuples(self, n: int):
        """All basis tuples of arity n within the weight cap, in a fixed order."""
        V = self.V
        idx = list(range(V.dim))
        w = V.weights
        cap = self.weight_cap

        def rec(prefix, budget, k):
            if k == 0:
                yield tuple(prefix)
                return
            for i in idx:
                if w[i] <= budget:
                    prefix.append(i)
                    yield from rec(prefix, budget - w[i], k - 1)
                    prefix.pop()

        yield from rec([], cap, n)

    def table(self, n: int) -> list:
        """Nonzero m_n values: [(tuple of labels, {label: coeff})]."""
        out = []
        labs = self.V.labels
        for t in self.tuples(n):
            val = self.m(t)
            if val:
                out.append((tuple(labs[i] for i in t), {labs[k]: v for k, v in sorted(val.items())}))
        return out


def transfer(contraction: Contraction, algebra: BigAlgebra, weight_cap: int, arity_cap: int = 4) -> AInftyStructure:
    return AInftyStructure(contraction, algebra, weight_cap, arity_cap)


# ---------------------------------------------------------------------------
# Stasheff identities

def stasheff_value(A: AInftyStructure, t: tuple) -> dict:
    """Σ_{r+s+t=n} (−1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) on a basis tuple."""
    n = len(t)
    degs = A.degrees(t)
    out: dict = {}
    for s in range(1, n + 1):
        for r in range(0, n - s + 1):
            tt = n - r - s
            inner = A.m(t[r:r + s])
            if not inner:
                continue
            sign = _sgn(r + s * tt) * _sgn(s * sum(degs[:r]))
            for j, c in inner.items():
                outer = A.m(t[:r] + (j,) + t[r + s:])
                vadd(out, outer, sign * c)
    return out


def stasheff_defect(A: AInftyStructure, n: int, parallel: int = 1) -> dict:
    tuples = list(A.tuples(n))

    def run(chunk):
        worst, wit = ZERO, None
        for t in chunk:
            v = stasheff_value(A, t)
            size = max((abs(x) for x in v.values()), default=ZERO)
            if size > worst:
                worst, wit = size, t
        return worst, wit

    if parallel > 1 and len(tuples) > 1:
        # warm caches deterministically first so worker threads only read
        for t in tuples:
            for s in range(1, n + 1):
                for r in range(0, n - s + 1):
                    A.m(t[r:r + s])
        chunks = [tuples[i::parallel] for i in range(parallel)]
        with ThreadPoolExecutor(max_workers=parallel) as ex:
            results = list(ex.map(run, chunks))
    else:
        results = [run(tuples)]
    worst, wit = ZERO, None
    for w, x in results:
        if w > worst or (w == worst and w and x is not None and (wit is None or x < wit)):
            worst, wit = w, x
    labs = A.V.labels
    return {
        "arity": n,
        "tuples": len(tuples),
        "max_defect": worst,
        "witness": None if wit is None else [labs[i] for i in wit],
    }


# ---------------------------------------------------------------------------
# morphisms

class TensorOps:
    """Tensors on the big space as dicts (tuple of indices) -> Fraction."""

    def __init__(self, contraction: Contraction, algebra: BigAlgebra):
        self.c = contraction
        self.alg = algebra
        self.ip = contraction.I @ contraction.P
        self.deg = contraction.big.degrees

    def sdeg(self, i: int) -> int:
        return self.deg[i] - 1

    def H_T(self, x: dict) -> dict:
        out: dict = {}
        H, ip = self.c.H, self.ip
        for tup, c in x.items():
            for pos in range(len(tup)):
                sign = _sgn(sum(self.sdeg(i) for i in tup[:pos]))
                factors = [ip.cols[i] for i in tup[:pos]] + [H.cols[tup[pos]]] + [{i: ONE} for i in tup[pos + 1:]]
                for combo in itertools.product(*[list(f.items()) for f in factors]):
                    coeff = c * sign
                    for _, a in combo:
                        coeff *= a
                    vaddterm(out, tuple(i for i, _ in combo), coeff)
        return out

    def B2(self, x: dict) -> dict:
        out: dict = {}
        for tup, c in x.items():
            for pos in range(len(tup) - 1):
                sign = _sgn(sum(self.sdeg(i) for i in tup[:pos]))
                y, z = tup[pos], tup[pos + 1]
                sign *= _sgn(self.deg[y])
                for k, a in self.alg.basis_product(y, z).items():
                    vaddterm(out, tup[:pos] + (k,) + tup[pos + 2:], c * sign * a)
        return out

    def projection_component(self, x: dict, n: int) -> dict:
        """ℙ_n applied to an arity-n tensor; result in small coordinates."""
        cur = x
        for _ in range(n - 1):
            cur = {k: -v for k, v in self.B2(self.H_T(cur)).items()}
        out: dict = {}
        for tup, c in cur.items():
            (i,) = tup
            vadd(out, self.c.P.cols[i], c)
        return out


def promote_morphisms(A: AInftyStructure):
    """(𝕀, ℙ) as callables on basis tuples in the suspended picture."""
    ops = TensorOps(A.c, A.alg)

    def inclusion(t):
        return A.infinity_inclusion(tuple(t))

    def projection(t):
        return ops.projection_component({tuple(t): ONE}, len(t))

    return inclusion, projection


def direct_inclusion_component(A: AInftyStructure, t: tuple) -> dict:
    """𝕀_n by the perturbation series on the bar construction (independent of the tree recursion).

    𝕀_n = arity-one part of −H_T B_2 (−H_T B_2)^{n−2} applied to i^{⊗n}, then the
    H_T on the last step collapses to h.
    """
    ops = TensorOps(A.c, A.alg)
    cols = [A.c.I.cols[i] for i in t]
    cur: dict = {}
    for combo in itertools.product(*[list(f.items()) for f in cols]):
        coeff = ONE
        for _, a in combo:
            coeff *= a
        vaddterm(cur, tuple(i for i, _ in combo), coeff)
    n = len(t)
    if n == 1:
        return {tup[0]: c for tup, c in cur.items()}
    for _ in range(n - 1):
        cur = {k: -v for k, v in ops.H_T(ops.B2(cur)).items()}
    return {tup[0]: c for tup, c in cur.items()}


def check_inclusion_morphism(A: AInftyStructure, n: int) -> dict:
    """Σ 𝕀(1^r ⊗ b'_s ⊗ 1^t) = b_1 𝕀_n + Σ b_2(𝕀_k ⊗ 𝕀_l) on the suspension."""
    D = A.c.D
    worst, wit, count = ZERO, None, 0
    for t in A.tuples(n):
        count += 1
        degs = A.degrees(t)
        lhs: dict = {}
        for s in range(1, n + 1):
            for r in range(0, n - s + 1):
                inner = A.b(t[r:r + s])
                sign = _sgn(sum(d - 1 for d in degs[:r]))
                for j, c in inner.items():
                    vadd(lhs, A.eta(t[:r] + (j,) + t[r + s:]), sign * c)
        rhs = D.apply(A.eta(t))
        for k in range(1, n):
            s = _sgn(sum(degs[:k]) - k + 1)
            vadd(rhs, A.alg.multiply(A.eta(t[:k]), A.eta(t[k:])), s)
        diff = vadd(lhs, rhs, -ONE)
        size = max((abs(v) for v in diff.values()), default=ZERO)
        if size > worst:
            worst, wit = size, t
    return {"arity": n, "tuples": count, "max_defect": worst, "witness": wit}


def _big_tuples(A: AInftyStructure, n: int):
    """Big-space basis tuples of arity n within the weight cap, in a fixed order."""
    W = A.W
    w = W.weights
    cap = A.weight_cap

    def rec(prefix, budget, k):
        if k == 0:
            yield tuple(prefix)
            return
        for i in range(W.dim):
            if w[i] <= budget:
                prefix.append(i)
                yield from rec(prefix, budget - w[i], k - 1)
                prefix.pop()

    yield from rec([], cap, n)


def check_projection_morphism(A: AInftyStructure, n: int, sample: int | None = None, seed: int = 0) -> dict:
    """Σ ℙ(1^r ⊗ b_s ⊗ 1^t) = Σ b'_k(ℙ ⊗ … ⊗ ℙ) on big-space tuples of arity n.

    With ``sample`` set, a seeded random subset of that many tuples is checked.
    """
    ops = TensorOps(A.c, A.alg)
    D = A.c.D
    deg = A.W.degrees
    cache: dict = {}

    def proj(t):
        if t not in cache:
            cache[t] = ops.projection_component({t: ONE}, len(t))
        return cache[t]

    tuples = list(_big_tuples(A, n))
    if sample is not None and sample < len(tuples):
        tuples = sorted(random.Random(seed).sample(tuples, sample))
    worst, wit = ZERO, None
    for t in tuples:
        diff: dict = {}
        for r in range(n):
            sign = _sgn(sum(deg[i] - 1 for i in t[:r]))
            for j, c in D.cols[t[r]].items():
                vadd(diff, proj(t[:r] + (j,) + t[r + 1:]), sign * c)
            if r + 1 < n:
                s2 = sign * _sgn(deg[t[r]])
                for j, c in A.alg.basis_product(t[r], t[r + 1]).items():
                    vadd(diff, proj(t[:r] + (j,) + t[r + 2:]), s2 * c)
        for k in range(1, n + 1):
            for comp in compositions(n, k):
                blocks, pos = [], 0
                for size in comp:
                    blocks.append(proj(t[pos:pos + size]))
                    pos += size
                if any(not b for b in blocks):
                    continue
                for combo in itertools.product(*[list(b.items()) for b in blocks]):
                    c = ONE
                    for _, a in combo:
                        c *= a
                    vadd(diff, A.b(tuple(i for i, _ in combo)), -c)
        size = max((abs(v) for v in diff.values()), default=ZERO)
        if size > worst:
            worst, wit = size, t
    return {"arity": n, "tuples": len(tuples), "max_defect": worst, "witness": wit}

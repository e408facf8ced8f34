"""Hypothesis strategies: random valid Lie pairs by change of basis, random aux connections."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from liepair.catalog import catalog
from liepair.lie_pair import Choices, apply_choices

coeffs = st.fractions(min_value=-2, max_value=2, max_denominator=3)
SMALL = ["abelian_2_1", "solvable", "solvable_h0", "heisenberg_x", "heisenberg_center", "sl2_borel",
         "nonabelian2_full", "oscillator"]


@st.composite
def splitting_matrices(draw, n: int, m: int):
    """Unipotent-times-diagonal matrices fixing the first m basis vectors."""
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    for c in range(m, n):
        for r in range(n):
            if r < c:
                rows[r][c] = draw(coeffs)
        rows[c][c] = draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)]))
    return tuple(tuple(r) for r in rows)


@st.composite
def aux_connections(draw, n: int, max_entries: int = 4):
    aux: dict = {}
    for _ in range(draw(st.integers(0, max_entries))):
        a, b, c = (draw(st.integers(0, n - 1)) for _ in range(3))
        aux.setdefault((a, b), {})[c] = draw(coeffs)
    aux = {k: {c: v for c, v in col.items() if v} for k, col in aux.items()}
    return {k: col for k, col in aux.items() if col}


@st.composite
def random_pairs(draw, names=None):
    """A catalog pair rewritten in a random basis adapted to h."""
    pair = catalog()[draw(st.sampled_from(names or SMALL))]
    split = draw(splitting_matrices(pair.dim_g, pair.dim_h))
    new_pair, _, _ = apply_choices(pair, Choices(split))
    return new_pair


@st.composite
def pairs_with_choices(draw, names=None):
    pair = catalog()[draw(st.sampled_from(names or SMALL))]
    n = pair.dim_g
    split = draw(st.one_of(st.none(), splitting_matrices(n, pair.dim_h)))
    aux = draw(st.one_of(st.none(), aux_connections(n))) if n else None
    return pair, Choices(split, aux, label="random")

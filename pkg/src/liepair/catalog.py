"""Small Lie pairs used as the standard test bed.

Basis conventions: the first ``dim_h`` vectors span h.
"""

from __future__ import annotations

from fractions import Fraction

from .lie_pair import Choices, LiePair, antisymmetrized


def abelian(dim_g: int = 2, dim_h: int = 1) -> LiePair:
    return LiePair(dim_g, dim_h, {}, name=f"abelian_{dim_g}_{dim_h}")


def solvable(dim_h: int = 1) -> LiePair:
    """span{e, b} with [e, b] = b; h = span{e} (or 0)."""
    if dim_h == 1:
        # x0 = e, x1 = b
        return LiePair(2, 1, antisymmetrized(2, [(0, 1, 1, 1)]), name="solvable")
    # x0 = b, x1 = e
    return LiePair(2, 0, antisymmetrized(2, [(1, 0, 0, 1)]), name="solvable_h0")


def heisenberg_x() -> LiePair:
    """x0 = x, x1 = y, x2 = z with [x, y] = z; h = span{x}."""
    return LiePair(3, 1, antisymmetrized(3, [(0, 1, 2, 1)]), name="heisenberg_x")


def heisenberg_center() -> LiePair:
    """x0 = z, x1 = x, x2 = y with [x, y] = z; h = span{z}."""
    return LiePair(3, 1, antisymmetrized(3, [(1, 2, 0, 1)]), name="heisenberg_center")


def heisenberg_h0() -> LiePair:
    return LiePair(3, 0, antisymmetrized(3, [(0, 1, 2, 1)]), name="heisenberg_h0")


def heisenberg_xy_not_subalgebra() -> LiePair:
    """h = span{x, y} is not closed: [x, y] = z."""
    return LiePair(3, 2, antisymmetrized(3, [(0, 1, 2, 1)]), name="heisenberg_xy")


def sl2_borel() -> LiePair:
    """x0 = h, x1 = e, x2 = f; h = span{h, e}."""
    br = antisymmetrized(3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
    return LiePair(3, 2, br, name="sl2_borel")


def sl2_h0() -> LiePair:
    br = antisymmetrized(3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
    return LiePair(3, 0, br, name="sl2_h0")


def nonabelian2_full() -> LiePair:
    """[e1, e2] = e2 with h = g."""
    return LiePair(2, 2, antisymmetrized(2, [(0, 1, 1, 1)]), name="nonabelian2_full")


def gl2_borel() -> LiePair:
    """x0 = E11, x1 = E22, x2 = E12, x3 = E21; h = upper triangular matrices."""
    br = antisymmetrized(4, [(0, 2, 2, 1), (0, 3, 3, -1), (1, 2, 2, -1), (1, 3, 3, 1),
                             (2, 3, 0, 1), (2, 3, 1, -1)])
    return LiePair(4, 3, br, name="gl2_borel")


def oscillator() -> LiePair:
    """x0 = t, x1 = z, x2 = x, x3 = y with [t, x] = y, [t, y] = −x, [x, y] = z; h = span{t, z}."""
    br = antisymmetrized(4, [(0, 2, 3, 1), (0, 3, 2, -1), (2, 3, 1, 1)])
    return LiePair(4, 2, br, name="oscillator")


def catalog() -> dict:
    pairs = [
        abelian(1, 0),
        abelian(2, 1),
        solvable(1),
        solvable(0),
        heisenberg_x(),
        heisenberg_center(),
        heisenberg_h0(),
        sl2_borel(),
        sl2_h0(),
        nonabelian2_full(),
        gl2_borel(),
        oscillator(),
    ]
    return {p.name: p for p in pairs}


def alternative_choices(pair: LiePair) -> list[Choices]:
    """Two distinct splittings and two distinct aux connections for comparison runs."""
    n, m = pair.dim_g, pair.dim_h
    ident = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    shifted = [row[:] for row in ident]
    if m and n > m:
        # complement vector x_m replaced by x_m + x_0
        shifted[0][m] = Fraction(1)
    aux1: dict = {}
    aux2: dict = {}
    if n:
        aux1[(n - 1, n - 1)] = {0: Fraction(1)}
        aux2[(0, n - 1)] = {n - 1: Fraction(1, 2)}
        aux2[(n - 1, 0)] = {0: Fraction(-1)}
    as_tuple = lambda M: tuple(tuple(r) for r in M)  # noqa: E731
    return [
        Choices(None, None, label="document basis, zero aux"),
        Choices(as_tuple(shifted), None, label="shifted complement, zero aux"),
        Choices(None, aux1, label="document basis, aux #1"),
        Choices(as_tuple(shifted), aux2, label="shifted complement, aux #2"),
    ]

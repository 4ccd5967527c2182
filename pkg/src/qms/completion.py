"""Extremal ranks of block matrices with free blocks.

Three shapes are covered, each with closed-form minimum and maximum rank
over all choices of the free blocks:

* two corners:  M(X, Y) = [[A1, X], [Y, B1]]
* L shape:      M(Y)    = [[Y, D1], [B1, A1]]
* H shape:      H(X, Y) = [[A1, B1, C1], [D1, X, E1], [F1, G1, Y]]

Minimum achievers are explicit constructions. Maximum achievers are found
by sampling, since a random completion is generic with high probability.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError
from .matrix import QMatrix, block_matrix, column_basis, g_inverse, mat_prod, random_matrix, solve_right

SAMPLE_COEFFS = (-3, -2, -1, 0, 1, 2, 3)
MAX_ACHIEVER_TRIES = 8


@dataclass(frozen=True)
class RankRange:
    min: int
    max: int

    def __post_init__(self):
        if self.min > self.max:
            raise ValueError(f"empty rank range [{self.min}, {self.max}]")

    def __contains__(self, r: int) -> bool:
        return self.min <= r <= self.max

    def to_json(self) -> dict:
        return {"min": self.min, "max": self.max}


def _rank_of(grid) -> int:
    """Rank of a block grid whose every row and column has a sized cell."""
    heights = [next(c.rows for c in row if c is not None) for row in grid]
    widths = [next(row[j].cols for row in grid if row[j] is not None)
              for j in range(len(grid[0]))]
    return block_matrix(grid, heights, widths).rank()


# two corners -----------------------------------------------------------------


@dataclass(frozen=True)
class TwoCornerInstance:
    """[[A1, X], [Y, B1]] with A1 m x n and B1 p x q; X is m x q, Y is p x n."""

    A1: QMatrix
    B1: QMatrix

    @property
    def x_shape(self) -> tuple:
        return (self.A1.rows, self.B1.cols)

    @property
    def y_shape(self) -> tuple:
        return (self.B1.rows, self.A1.cols)

    def assemble(self, x: QMatrix, y: QMatrix) -> QMatrix:
        if x.shape != self.x_shape or y.shape != self.y_shape:
            raise DimensionError(f"X must be {self.x_shape} and Y {self.y_shape}")
        m, n = self.A1.shape
        p, q = self.B1.shape
        return block_matrix([[self.A1, x], [y, self.B1]], [m, p], [n, q])

    def random_completion(self, rng: random.Random, coeffs=SAMPLE_COEFFS) -> tuple:
        return (random_matrix(rng, *self.x_shape, coeffs), random_matrix(rng, *self.y_shape, coeffs))


def two_corner_rank_range(inst: TwoCornerInstance) -> RankRange:
    m, n = inst.A1.shape
    p, q = inst.B1.shape
    ra, rb = inst.A1.rank(), inst.B1.rank()
    return RankRange(max(ra, rb), min(m + p, n + q, ra + p + q, rb + m + n))


def _full_rank_factors(a: QMatrix) -> tuple:
    """(L, R) with a == L @ R and L having rank(a) independent columns."""
    left = column_basis(a)
    right = solve_right(left, a)
    return left, right


def two_corner_min_achiever(inst: TwoCornerInstance) -> tuple:
    """X, Y making [[A1, X], [Y, B1]] as small in rank as possible.

    With full-rank factorizations A1 = La Ra and B1 = Lb Rb, pad the factors
    of the lower-rank block with zeros to the larger rank r and use
    X = La Rb', Y = Lb' Ra; the whole matrix is then [La; Lb'] [Ra Rb'].
    """
    la, ra = _full_rank_factors(inst.A1)
    lb, rb = _full_rank_factors(inst.B1)
    r = max(la.cols, lb.cols)
    la, ra = _pad_factors(la, ra, r)
    lb, rb = _pad_factors(lb, rb, r)
    return la @ rb, lb @ ra


def _pad_factors(left: QMatrix, right: QMatrix, r: int) -> tuple:
    k = left.cols
    left = block_matrix([[left, None]], [left.rows], [k, r - k])
    right = block_matrix([[right], [None]], [k, r - k], [right.cols])
    return left, right


# L shape ---------------------------------------------------------------------


@dataclass(frozen=True)
class LShapeInstance:
    """[[Y, D1], [B1, A1]]; Y has as many rows as D1 and as many columns as B1."""

    A1: QMatrix
    B1: QMatrix
    D1: QMatrix

    def __post_init__(self):
        if self.B1.rows != self.A1.rows:
            raise DimensionError(f"B1 rows {self.B1.rows} != A1 rows {self.A1.rows}")
        if self.D1.cols != self.A1.cols:
            raise DimensionError(f"D1 cols {self.D1.cols} != A1 cols {self.A1.cols}")

    @property
    def y_shape(self) -> tuple:
        return (self.D1.rows, self.B1.cols)

    def assemble(self, y: QMatrix) -> QMatrix:
        if y.shape != self.y_shape:
            raise DimensionError(f"Y must be {self.y_shape}")
        return block_matrix([[y, self.D1], [self.B1, self.A1]],
                            [self.D1.rows, self.A1.rows], [self.B1.cols, self.A1.cols])

    def random_completion(self, rng: random.Random, coeffs=SAMPLE_COEFFS) -> QMatrix:
        return random_matrix(rng, *self.y_shape, coeffs)


def l_shape_rank_range(inst: LShapeInstance) -> RankRange:
    n, m = inst.y_shape
    r_ab = _rank_of([[inst.A1, inst.B1]])
    r_ad = _rank_of([[inst.A1], [inst.D1]])
    r_a = inst.A1.rank()
    return RankRange(r_ab + r_ad - r_a, min(n + r_ab, m + r_ad))


def l_shape_min_achiever(inst: LShapeInstance) -> QMatrix:
    """Y = D1 A1^- B1 with a reflexive inner inverse attains the minimum."""
    return mat_prod(inst.D1, g_inverse(inst.A1), inst.B1)


# H shape ---------------------------------------------------------------------


@dataclass(frozen=True)
class HShapeInstance:
    """3 x 3 block grid with free X at (2,2) and free Y at (3,3).

    Row heights are A1.rows, D1.rows, F1.rows and column widths are
    A1.cols, B1.cols, C1.cols, so X is D1.rows x B1.cols and Y is
    F1.rows x C1.cols.
    """

    A1: QMatrix
    B1: QMatrix
    C1: QMatrix
    D1: QMatrix
    E1: QMatrix
    F1: QMatrix
    G1: QMatrix

    def __post_init__(self):
        h = (self.A1.rows, self.D1.rows, self.F1.rows)
        w = (self.A1.cols, self.B1.cols, self.C1.cols)
        checks = (("B1", self.B1, 0, 1), ("C1", self.C1, 0, 2), ("D1", self.D1, 1, 0),
                  ("E1", self.E1, 1, 2), ("F1", self.F1, 2, 0), ("G1", self.G1, 2, 1))
        for name, mat, i, j in checks:
            if mat.shape != (h[i], w[j]):
                raise DimensionError(f"{name} is {mat.shape}, expected {(h[i], w[j])}")

    @property
    def x_shape(self) -> tuple:
        return (self.D1.rows, self.B1.cols)

    @property
    def y_shape(self) -> tuple:
        return (self.F1.rows, self.C1.cols)

    def assemble(self, x: QMatrix, y: QMatrix) -> QMatrix:
        if x.shape != self.x_shape or y.shape != self.y_shape:
            raise DimensionError(f"X must be {self.x_shape} and Y {self.y_shape}")
        grid = [[self.A1, self.B1, self.C1], [self.D1, x, self.E1], [self.F1, self.G1, y]]
        return block_matrix(grid, [self.A1.rows, self.D1.rows, self.F1.rows],
                            [self.A1.cols, self.B1.cols, self.C1.cols])

    def random_completion(self, rng: random.Random, coeffs=SAMPLE_COEFFS) -> tuple:
        return (random_matrix(rng, *self.x_shape, coeffs), random_matrix(rng, *self.y_shape, coeffs))


def h_shape_rank_range(inst: HShapeInstance) -> RankRange:
    a, b, c, d, e, f, g = (inst.A1, inst.B1, inst.C1, inst.D1, inst.E1, inst.F1, inst.G1)
    mt, m = inst.x_shape
    pt, p = inst.y_shape
    r_abc = _rank_of([[a, b, c]])
    r_adf = _rank_of([[a], [d], [f]])
    r_ab_fg = _rank_of([[a, b], [f, g]])
    r_ac_de = _rank_of([[a, c], [d, e]])
    r_ab = _rank_of([[a, b]])
    r_ac = _rank_of([[a, c]])
    r_ad = _rank_of([[a], [d]])
    r_af = _rank_of([[a], [f]])
    hi = min(mt + pt + r_abc, mt + p + r_ab_fg, m + pt + r_ac_de, m + p + r_adf)
    lo = r_abc + r_adf + max(r_ac_de - r_ac - r_ad, r_ab_fg - r_ab - r_af)
    return RankRange(lo, hi)


# sampling --------------------------------------------------------------------


def sample_ranks(inst, count: int, seed: int = 0, coeffs: Sequence[int] = SAMPLE_COEFFS) -> list:
    """Ranks of ``count`` random completions of any of the three shapes."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        free = inst.random_completion(rng, coeffs)
        free = free if isinstance(free, tuple) else (free,)
        out.append(inst.assemble(*free).rank())
    return out


def max_achiever(inst, seed: int = 0, tries: int = MAX_ACHIEVER_TRIES,
                 coeffs: Sequence[int] = SAMPLE_COEFFS):
    """A random completion reaching the maximum rank, or None after ``tries`` seeds."""
    target = {TwoCornerInstance: two_corner_rank_range, LShapeInstance: l_shape_rank_range,
              HShapeInstance: h_shape_rank_range}[type(inst)](inst).max
    for k in range(tries):
        free = inst.random_completion(random.Random(seed + k), coeffs)
        args = free if isinstance(free, tuple) else (free,)
        if inst.assemble(*args).rank() == target:
            return free
    return None

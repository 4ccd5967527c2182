"""Dense matrices over the rational quaternions.

A :class:`QMatrix` keeps its entries as one flat tuple of integer
coefficients (four per entry, row-major) over a single positive common
denominator. Products, ranks and eliminations run on the integer part
through :mod:`qms.kernels`; the denominator only rescales results.

Elimination uses left row operations, so it preserves right-linear
relations between columns. That is the relation the rank counts.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import kernels
from .errors import DimensionError, SingularError
from .scalar import Quaternion


def _qmul(x0, x1, x2, x3, y0, y1, y2, y3):
    return (
        x0 * y0 - x1 * y1 - x2 * y2 - x3 * y3,
        x0 * y1 + x1 * y0 + x2 * y3 - x3 * y2,
        x0 * y2 - x1 * y3 + x2 * y0 + x3 * y1,
        x0 * y3 + x1 * y2 - x2 * y1 + x3 * y0,
    )


def _scalar_parts(q) -> tuple:
    """Integer numerators and a common denominator of a quaternion."""
    c = Quaternion.coerce(q).coeffs
    den = lcm(*(x.denominator for x in c))
    return tuple(x.numerator * (den // x.denominator) for x in c), den


class QMatrix:
    """Immutable m-by-n quaternion matrix with value semantics."""

    __slots__ = ("rows", "cols", "_num", "_den")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        """Build from a flat row-major iterable of quaternion-like values.

        ``QMatrix.from_rows`` is usually more convenient.
        """
        quats = [Quaternion.coerce(e) for e in entries]
        if len(quats) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(quats)}")
        den = 1
        for q in quats:
            for c in q.coeffs:
                den = lcm(den, c.denominator)
        num = []
        for q in quats:
            for c in q.coeffs:
                num.append(c.numerator * (den // c.denominator))
        self._set(rows, cols, num, den)

    def _set(self, rows, cols, num, den):
        if rows < 0 or cols < 0:
            raise DimensionError("negative dimension")
        g = gcd(den, *num) if num else den
        if g == 0 or not any(num):
            num, den = [0] * len(num), 1
        elif g != 1:
            num = [x // g for x in num]
            den //= g
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_num", tuple(num))
        object.__setattr__(self, "_den", den)

    @classmethod
    def _raw(cls, rows: int, cols: int, num, den: int = 1) -> "QMatrix":
        if den < 0:
            num, den = [-x for x in num], -den
        obj = cls.__new__(cls)
        obj._set(rows, cols, num, den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    # construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls._raw(rows, cols, [0] * (4 * rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        num = [0] * (4 * n * n)
        for i in range(n):
            num[4 * (i * n + i)] = 1
        return cls._raw(n, n, num)

    @classmethod
    def from_integers(cls, rows: int, cols: int, num, den: int = 1) -> "QMatrix":
        """Wrap a flat list of integer coefficients (4 per entry) over ``den``."""
        if len(num) != 4 * rows * cols:
            raise DimensionError("coefficient list has the wrong length")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return cls._raw(rows, cols, list(num), den)

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def numerators(self) -> tuple:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def __getitem__(self, idx) -> Quaternion:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
        b = 4 * (i * self.cols + j)
        d = self._den
        return Quaternion(*(Fraction(x, d) for x in self._num[b:b + 4]))

    def entries(self) -> list:
        return [self[i, j] for i in range(self.rows) for j in range(self.cols)]

    def to_rows(self) -> list:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._den, self._num) == (
            other.rows, other.cols, other._den, other._num)

    def __hash__(self):
        return hash((self.rows, self.cols, self._den, self._num))

    def __repr__(self):
        body = "; ".join(", ".join(str(q) for q in row) for row in self.to_rows())
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"

    # arithmetic -----------------------------------------------------------

    def _common(self, other: "QMatrix"):
        d = lcm(self._den, other._den)
        fa, fb = d // self._den, d // other._den
        a = self._num if fa == 1 else [x * fa for x in self._num]
        b = other._num if fb == 1 else [x * fb for x in other._num]
        return a, b, d

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same_shape(other)
        a, b, d = self._common(other)
        return QMatrix._raw(self.rows, self.cols, [x + y for x, y in zip(a, b)], d)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same_shape(other)
        a, b, d = self._common(other)
        return QMatrix._raw(self.rows, self.cols, [x - y for x, y in zip(a, b)], d)

    def __neg__(self):
        return QMatrix._raw(self.rows, self.cols, [-x for x in self._num], self._den)

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            return mat_mul(self, other)
        try:
            (y0, y1, y2, y3), qd = _scalar_parts(other)
        except (TypeError, ValueError):
            return NotImplemented
        num = self._num
        out = []
        for b in range(0, len(num), 4):
            out.extend(_qmul(num[b], num[b + 1], num[b + 2], num[b + 3], y0, y1, y2, y3))
        return QMatrix._raw(self.rows, self.cols, out, self._den * qd)

    def __rmul__(self, other):
        # scalar on the left: q * M
        try:
            (x0, x1, x2, x3), qd = _scalar_parts(other)
        except (TypeError, ValueError):
            return NotImplemented
        num = self._num
        out = []
        for b in range(0, len(num), 4):
            out.extend(_qmul(x0, x1, x2, x3, num[b], num[b + 1], num[b + 2], num[b + 3]))
        return QMatrix._raw(self.rows, self.cols, out, self._den * qd)

    # structure ------------------------------------------------------------

    def conj_transpose(self) -> "QMatrix":
        m, n, num = self.rows, self.cols, self._num
        out = [0] * len(num)
        for i in range(m):
            for j in range(n):
                s, t = 4 * (i * n + j), 4 * (j * m + i)
                out[t] = num[s]
                out[t + 1] = -num[s + 1]
                out[t + 2] = -num[s + 2]
                out[t + 3] = -num[s + 3]
        return QMatrix._raw(n, m, out, self._den)

    @property
    def H(self) -> "QMatrix":
        return self.conj_transpose()

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "QMatrix":
        """Rows ``r0:r1`` and columns ``c0:c1`` (half-open)."""
        if not (0 <= r0 <= r1 <= self.rows and 0 <= c0 <= c1 <= self.cols):
            raise DimensionError(f"slice [{r0}:{r1}, {c0}:{c1}] outside {self.shape}")
        n, num = self.cols, self._num
        out = []
        for i in range(r0, r1):
            out.extend(num[4 * (i * n + c0): 4 * (i * n + c1)])
        return QMatrix._raw(r1 - r0, c1 - c0, out, self._den)

    def select(self, row_idx: Sequence[int] | None = None,
               col_idx: Sequence[int] | None = None) -> "QMatrix":
        """Rows and columns picked by index lists (``None`` keeps all)."""
        rows = range(self.rows) if row_idx is None else row_idx
        cols = range(self.cols) if col_idx is None else col_idx
        n, num = self.cols, self._num
        out = []
        for i in rows:
            for j in cols:
                b = 4 * (i * n + j)
                out.extend(num[b:b + 4])
        return QMatrix._raw(len(rows), len(cols), out, self._den)

    def rank(self) -> int:
        return kernels.rank(list(self._num), self.rows, self.cols)


# --------------------------------------------------------------------------
# free functions


def mat_mul(x: QMatrix, y: QMatrix) -> QMatrix:
    if x.cols != y.rows:
        raise DimensionError(f"cannot multiply {x.rows}x{x.cols} by {y.rows}x{y.cols}")
    num = kernels.matmul(list(x._num), list(y._num), x.rows, x.cols, y.cols)
    return QMatrix._raw(x.rows, y.cols, num, x._den * y._den)


def mat_prod(*factors: QMatrix) -> QMatrix:
    out = factors[0]
    for f in factors[1:]:
        out = mat_mul(out, f)
    return out


def rank(a: QMatrix) -> int:
    return a.rank()


def conj_transpose(a: QMatrix) -> QMatrix:
    return a.conj_transpose()


def hstack(*mats: QMatrix, rows: int | None = None) -> QMatrix:
    """Horizontal concatenation; ``rows`` is needed only when ``mats`` is empty."""
    if not mats:
        return QMatrix.zeros(rows or 0, 0)
    m = mats[0].rows
    for a in mats:
        if a.rows != m:
            raise DimensionError(f"hstack of {m}-row and {a.rows}-row matrices")
    d = lcm(*(a._den for a in mats))
    ncols = sum(a.cols for a in mats)
    out = []
    for i in range(m):
        for a in mats:
            f = d // a._den
            seg = a._num[4 * i * a.cols: 4 * (i + 1) * a.cols]
            out.extend(seg if f == 1 else [x * f for x in seg])
    return QMatrix._raw(m, ncols, out, d)


def vstack(*mats: QMatrix, cols: int | None = None) -> QMatrix:
    if not mats:
        return QMatrix.zeros(0, cols or 0)
    n = mats[0].cols
    for a in mats:
        if a.cols != n:
            raise DimensionError(f"vstack of {n}-column and {a.cols}-column matrices")
    d = lcm(*(a._den for a in mats))
    out = []
    for a in mats:
        f = d // a._den
        out.extend(a._num if f == 1 else [x * f for x in a._num])
    return QMatrix._raw(sum(a.rows for a in mats), n, out, d)


def block_diag(*mats: QMatrix) -> QMatrix:
    rows = [a.rows for a in mats]
    cols = [a.cols for a in mats]
    grid = [[a if i == j else None for j, a in enumerate(mats)] for i in range(len(mats))]
    return block_matrix(grid, rows, cols)


def block_matrix(grid, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> QMatrix:
    """Assemble a block matrix; ``None`` or ``0`` cells are zero blocks."""
    if len(grid) != len(row_sizes):
        raise DimensionError("grid height does not match row sizes")
    rows = []
    for i, line in enumerate(grid):
        if len(line) != len(col_sizes):
            raise DimensionError("grid width does not match column sizes")
        parts = []
        for j, cell in enumerate(line):
            if cell is None or (not isinstance(cell, QMatrix) and cell == 0):
                cell = QMatrix.zeros(row_sizes[i], col_sizes[j])
            elif cell.shape != (row_sizes[i], col_sizes[j]):
                raise DimensionError(
                    f"block ({i + 1},{j + 1}) is {cell.rows}x{cell.cols}, "
                    f"expected {row_sizes[i]}x{col_sizes[j]}")
            parts.append(cell)
        rows.append(hstack(*parts, rows=row_sizes[i]))
    return vstack(*rows, cols=sum(col_sizes))


def offsets(sizes: Sequence[int]) -> list:
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


def split(a: QMatrix, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> list:
    """Inverse of :func:`block_matrix`: a grid of submatrices."""
    ro, co = offsets(row_sizes), offsets(col_sizes)
    if ro[-1] != a.rows or co[-1] != a.cols:
        raise DimensionError(f"block sizes {ro[-1]}x{co[-1]} do not cover {a.shape}")
    return [[a.submatrix(ro[i], ro[i + 1], co[j], co[j + 1]) for j in range(len(col_sizes))]
            for i in range(len(row_sizes))]


def random_matrix(rng: random.Random, rows: int, cols: int,
                  coeffs: Sequence[int] = (-2, -1, 0, 1, 2)) -> QMatrix:
    """Quaternion entries with integer coefficients drawn from ``coeffs``."""
    num = [rng.choice(coeffs) for _ in range(4 * rows * cols)]
    return QMatrix._raw(rows, cols, num)


def random_rank_matrix(rng: random.Random, rows: int, cols: int, r: int,
                       coeffs: Sequence[int] = (-2, -1, 0, 1, 2)) -> QMatrix:
    """Product of random rows-by-r and r-by-cols factors; rank at most r."""
    return mat_mul(random_matrix(rng, rows, r, coeffs), random_matrix(rng, r, cols, coeffs))


# --------------------------------------------------------------------------
# elimination based operations


@dataclass(frozen=True)
class RowReduction:
    """``P @ A == R`` with ``R`` in reduced row echelon form.

    Pivot entries of ``R`` are 1 and each pivot column is a unit vector.
    ``P`` is only filled in when requested.
    """

    R: QMatrix
    pivots: tuple
    P: QMatrix | None = None


def _normalize_rows(flat: list, m: int, width: int, pivots) -> tuple:
    """Left-multiply pivot row k by the inverse of its pivot entry.

    Returns integer numerators over one common denominator.
    """
    rows = [flat[4 * width * i: 4 * width * (i + 1)] for i in range(m)]
    dens = [1] * m
    for k, c in enumerate(pivots):
        row = rows[k]
        b = 4 * c
        p0, p1, p2, p3 = row[b], row[b + 1], row[b + 2], row[b + 3]
        norm = p0 * p0 + p1 * p1 + p2 * p2 + p3 * p3
        new = []
        for t in range(0, len(row), 4):
            new.extend(_qmul(p0, -p1, -p2, -p3, row[t], row[t + 1], row[t + 2], row[t + 3]))
        g = gcd(norm, *new)
        rows[k] = [x // g for x in new]
        dens[k] = norm // g
    d = lcm(*dens) if dens else 1
    out = []
    for row, rd in zip(rows, dens):
        f = d // rd
        out.extend(row if f == 1 else [x * f for x in row])
    return out, d


def row_reduce(a: QMatrix, with_transform: bool = False) -> RowReduction:
    m, n = a.shape
    if with_transform:
        aug = hstack(QMatrix._raw(m, n, a._num, 1), QMatrix.identity(m))
        flat, piv = kernels.rref(list(aug._num), m, n + m, n)
        out, d = _normalize_rows(flat, m, n + m, piv)
        full = QMatrix._raw(m, n + m, out, d)
        R = full.submatrix(0, m, 0, n)
        # the augmented block tracked operations on the numerator matrix
        P = full.submatrix(0, m, n, n + m) * a._den
        return RowReduction(R, tuple(piv), P)
    flat, piv = kernels.rref(list(a._num), m, n, n)
    out, d = _normalize_rows(flat, m, n, piv)
    return RowReduction(QMatrix._raw(m, n, out, d), tuple(piv))


def pivot_columns(a: QMatrix) -> tuple:
    if a.rows == 0 or a.cols == 0:
        return ()
    _, piv = kernels.rref(list(a._num), a.rows, a.cols, a.cols)
    return tuple(piv)


def inverse(a: QMatrix) -> QMatrix:
    if not a.is_square():
        raise DimensionError(f"inverse of a non-square {a.rows}x{a.cols} matrix")
    red = row_reduce(a, with_transform=True)
    if len(red.pivots) != a.rows:
        raise SingularError(f"matrix has rank {len(red.pivots)} < {a.rows}")
    return red.P


def is_invertible(a: QMatrix) -> bool:
    return a.is_square() and a.rank() == a.rows


@dataclass(frozen=True)
class CanonicalForm:
    """``P @ A @ Q == [[I_r, 0], [0, 0]]`` with P, Q invertible."""

    P: QMatrix
    Q: QMatrix
    r: int


def canonical_form(a: QMatrix) -> CanonicalForm:
    m, n = a.shape
    red = row_reduce(a, with_transform=True)
    r = len(red.pivots)
    free = [j for j in range(n) if j not in set(red.pivots)]
    order = list(red.pivots) + free
    perm = QMatrix.identity(n).select(None, order)
    # R @ perm = [[I_r, N], [0, 0]]; clear N with a unipotent column operation
    N = red.R.select(range(r), free)
    clear = block_matrix([[QMatrix.identity(r), -N], [None, QMatrix.identity(n - r)]],
                         [r, n - r], [r, n - r])
    return CanonicalForm(red.P, mat_mul(perm, clear), r)


def rank_pattern(m: int, n: int, r: int) -> QMatrix:
    """The m-by-n matrix [[I_r, 0], [0, 0]]."""
    return block_matrix([[QMatrix.identity(r), None], [None, None]], [r, m - r], [r, n - r])


def g_inverse(a: QMatrix) -> QMatrix:
    """Reflexive inner inverse: A A^- A = A and A^- A A^- = A^-."""
    cf = canonical_form(a)
    return mat_prod(cf.Q, rank_pattern(a.cols, a.rows, cf.r), cf.P)


def null_space(a: QMatrix) -> QMatrix:
    """Columns spanning {x : A x = 0}, scalars acting on the right."""
    m, n = a.shape
    red = row_reduce(a)
    piv = red.pivots
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        col = [Quaternion(0)] * n
        col[f] = Quaternion(1)
        for k, c in enumerate(piv):
            col[c] = -red.R[k, f]
        basis.append(col)
    return QMatrix.from_rows([[basis[k][i] for k in range(len(free))] for i in range(n)],
                             cols=len(free))


def solve_right(a: QMatrix, b: QMatrix) -> QMatrix | None:
    """Some X with A X = B, or None if there is none."""
    if a.rows != b.rows:
        raise DimensionError(f"A has {a.rows} rows, B has {b.rows}")
    m, n, k = a.rows, a.cols, b.cols
    aug = hstack(a, b)
    flat, piv = kernels.rref(list(aug._num), m, n + k, n)
    r = len(piv)
    w = 4 * (n + k)
    for i in range(r, m):
        if any(flat[w * i + 4 * n: w * (i + 1)]):
            return None
    out, d = _normalize_rows(flat, m, n + k, piv)
    sol = [0] * (4 * n * k)
    for row, c in enumerate(piv):
        src = w * row + 4 * n
        sol[4 * c * k: 4 * (c + 1) * k] = out[src: src + 4 * k]
    return QMatrix._raw(n, k, sol, d)


def solve_left(a: QMatrix, b: QMatrix) -> QMatrix | None:
    """Some X with X A = B, or None."""
    x = solve_right(a.conj_transpose(), b.conj_transpose())
    return None if x is None else x.conj_transpose()


def column_basis(a: QMatrix) -> QMatrix:
    """The pivot columns of A: a basis of its right column space."""
    return a.select(None, pivot_columns(a))


def extend_basis(s: QMatrix, t: QMatrix) -> QMatrix:
    """Columns of T that extend the independent columns S to a basis of col[S T]."""
    piv = pivot_columns(hstack(s, t))
    return t.select(None, [c - s.cols for c in piv if c >= s.cols])


def intersect(u: QMatrix, w: QMatrix) -> QMatrix:
    """A basis of col(U) ∩ col(W); U must have independent columns."""
    ns = null_space(hstack(u, -w))
    return column_basis(mat_mul(u, ns.submatrix(0, u.cols, 0, ns.cols)))

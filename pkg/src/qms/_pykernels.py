"""Pure Python integer kernels (reference implementation and fallback).

Matrices are flat lists of Python ints: entry (i, j) of an m-by-n matrix
occupies positions 4*(i*n + j) .. 4*(i*n + j) + 3 as the coefficients of
1, i, j, k. Elimination is fraction free: to clear row j against pivot p
in row r the row operation is

    row_j <- N(p) * row_j - (a_jc * conj(p)) * row_r

which is a left multiplication by an invertible matrix, so ranks and
right-linear relations between columns are preserved. Each updated row is
divided by the gcd of its coefficients to slow down integer growth.
"""
from __future__ import annotations

from math import gcd


def _content_reduce(row: list, start: int = 0) -> None:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return
    if g > 1:
        for t in range(start, len(row)):
            row[t] //= g


def _pivot_update(row, prow, c0, n, N, s0, s1, s2, s3):
    # row[l] <- N*row[l] - s*prow[l] for entries l in [c0, n)
    for base in range(4 * c0, 4 * n, 4):
        y0 = prow[base]
        y1 = prow[base + 1]
        y2 = prow[base + 2]
        y3 = prow[base + 3]
        if y0 or y1 or y2 or y3:
            row[base] = N * row[base] - (s0 * y0 - s1 * y1 - s2 * y2 - s3 * y3)
            row[base + 1] = N * row[base + 1] - (s0 * y1 + s1 * y0 + s2 * y3 - s3 * y2)
            row[base + 2] = N * row[base + 2] - (s0 * y2 - s1 * y3 + s2 * y0 + s3 * y1)
            row[base + 3] = N * row[base + 3] - (s0 * y3 + s1 * y2 - s2 * y1 + s3 * y0)
        elif N != 1:
            row[base] *= N
            row[base + 1] *= N
            row[base + 2] *= N
            row[base + 3] *= N


def _eliminate(rows: list, n: int, npiv: int, full: bool) -> list:
    """Shared elimination loop; returns the pivot columns.

    With ``full`` the pivot column is cleared in every other row (Gauss-Jordan),
    otherwise only below the pivot.
    """
    m = len(rows)
    pivots = []
    r = 0
    for c in range(npiv):
        if r == m:
            break
        b = 4 * c
        piv = -1
        for i in range(r, m):
            row = rows[i]
            if row[b] or row[b + 1] or row[b + 2] or row[b + 3]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[piv], rows[r] = rows[r], rows[piv]
        prow = rows[r]
        p0, p1, p2, p3 = prow[b], prow[b + 1], prow[b + 2], prow[b + 3]
        norm = p0 * p0 + p1 * p1 + p2 * p2 + p3 * p3
        targets = range(m) if full else range(r + 1, m)
        for i in targets:
            if i == r:
                continue
            row = rows[i]
            q0, q1, q2, q3 = row[b], row[b + 1], row[b + 2], row[b + 3]
            if not (q0 or q1 or q2 or q3):
                continue
            # s = q * conj(p)
            s0 = q0 * p0 + q1 * p1 + q2 * p2 + q3 * p3
            s1 = -q0 * p1 + q1 * p0 - q2 * p3 + q3 * p2
            s2 = -q0 * p2 + q1 * p3 + q2 * p0 - q3 * p1
            s3 = -q0 * p3 - q1 * p2 + q2 * p1 + q3 * p0
            g = gcd(norm, s0, s1, s2, s3)
            N = norm // g
            _pivot_update(row, prow, 0 if full else c, n, N, s0 // g, s1 // g, s2 // g, s3 // g)
            _content_reduce(row)
        pivots.append(c)
        r += 1
    return pivots


def rank(a: list, m: int, n: int) -> int:
    if m == 0 or n == 0:
        return 0
    rows = [a[4 * n * i: 4 * n * (i + 1)] for i in range(m)]
    for row in rows:
        _content_reduce(row)
    return len(_eliminate(rows, n, n, full=False))


def rref(a: list, m: int, n: int, npiv: int) -> tuple:
    """Fraction-free Gauss-Jordan on the first ``npiv`` columns.

    Returns ``(flat, pivots)``. Pivot row k holds the pivot of column
    ``pivots[k]``; the other pivot columns are zero in that row. Columns past
    ``npiv`` are carried along, which is how callers track the row transform.
    """
    rows = [a[4 * n * i: 4 * n * (i + 1)] for i in range(m)]
    for row in rows:
        _content_reduce(row)
    pivots = _eliminate(rows, n, npiv, full=True)
    flat = []
    for row in rows:
        flat.extend(row)
    return flat, pivots


def matmul(a: list, b: list, m: int, k: int, n: int) -> list:
    out = [0] * (4 * m * n)
    for i in range(m):
        arow = 4 * k * i
        for l in range(k):
            ab = arow + 4 * l
            x0, x1, x2, x3 = a[ab], a[ab + 1], a[ab + 2], a[ab + 3]
            if not (x0 or x1 or x2 or x3):
                continue
            brow = 4 * n * l
            o = 4 * n * i
            for j in range(n):
                bb = brow + 4 * j
                y0, y1, y2, y3 = b[bb], b[bb + 1], b[bb + 2], b[bb + 3]
                if y0 or y1 or y2 or y3:
                    oo = o + 4 * j
                    out[oo] += x0 * y0 - x1 * y1 - x2 * y2 - x3 * y3
                    out[oo + 1] += x0 * y1 + x1 * y0 + x2 * y3 - x3 * y2
                    out[oo + 2] += x0 * y2 - x1 * y3 + x2 * y0 + x3 * y1
                    out[oo + 3] += x0 * y3 + x1 * y2 - x2 * y1 + x3 * y0
    return out

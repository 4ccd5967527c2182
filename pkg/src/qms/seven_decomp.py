"""Simultaneous decomposition of A together with B, C, D and E, F, G.

The result satisfies

    A = P S_A Q,  B = P S_B T1,  C = P S_C T2,  D = P S_D T3,
    E = V1 S_E Q, F = V2 S_F Q,  G = V3 S_G Q

where S_B, S_C, S_D are the row-sharing 0/I patterns, S_E, S_F, S_G are
the conjugate transposes of the same patterns built from the column sizes,
and S_A is an 11 x 11 block matrix whose last block row and column vanish
except for an identity I_t in the corner, with A_{10,10} = 0 as well.

Construction:
1. reduce (B, C, D) and (E, F, G) separately, giving P1 and Q1;
2. bring the (10,10) corner of P1^-1 A Q1^-1 to [[0, 0], [0, I_t]];
3. clear the rest of block row and column 11 against I_t.

``P`` and ``Q`` are stored so that the identities above read as written,
i.e. they are the inverses of the reducing transforms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .canonical_forms import (
    RowBlockSizes, TripleDecomposition, col_block_sizes_from_ranks, pattern_matrix,
    row_block_sizes_from_ranks, triple_col_decompose, triple_row_decompose,
)
from .errors import BlockIndexError, DimensionError, InternalInconsistency
from .instance import Instance, matrix_to_json
from .matrix import (
    QMatrix, block_diag, block_matrix, canonical_form, hstack, inverse, mat_prod, split,
    vstack,
)


@dataclass(frozen=True)
class BlockPartition:
    """Row sizes m1..m8 and column sizes n1..n8 plus the defect t."""

    rows: RowBlockSizes
    cols: RowBlockSizes
    t: int
    m: int
    n: int

    @property
    def row_layout(self) -> tuple:
        lay = self.rows.layout
        return lay[:9] + (lay[9] - self.t, self.t)

    @property
    def col_layout(self) -> tuple:
        lay = self.cols.layout
        return lay[:9] + (lay[9] - self.t, self.t)

    def m_(self, k: int) -> int:
        return self.rows[k]

    def n_(self, k: int) -> int:
        return self.cols[k]

    @property
    def r_bcd(self) -> int:
        return self.rows.total_rank

    @property
    def r_efg(self) -> int:
        return self.cols.total_rank


@dataclass(frozen=True)
class SevenDecomposition:
    P: QMatrix
    Q: QMatrix
    T1: QMatrix
    T2: QMatrix
    T3: QMatrix
    V1: QMatrix
    V2: QMatrix
    V3: QMatrix
    SA: QMatrix
    partition: BlockPartition
    inputs: Instance = field(repr=False)

    @cached_property
    def blocks(self) -> list:
        """11 x 11 grid of the blocks of S_A (0-based lists)."""
        return split(self.SA, self.partition.row_layout, self.partition.col_layout)

    def block(self, i: int, j: int) -> QMatrix:
        """Block A_ij of S_A, 1-based."""
        return extract_block(self, i, j)

    @cached_property
    def patterns(self) -> tuple:
        """(S_B, S_C, S_D, S_E, S_F, S_G) for this partition."""
        part, d = self.partition, self.inputs.dims
        rl, cl = part.row_layout, part.col_layout
        row = tuple(pattern_matrix(part.rows, k, w, rl) for k, w in enumerate((d.p1, d.p2, d.p3)))
        col = tuple(pattern_matrix(part.cols, k, w, cl).H
                    for k, w in enumerate((d.q1, d.q2, d.q3)))
        return row + col

    def transforms(self) -> dict:
        return {"P": self.P, "Q": self.Q, "T1": self.T1, "T2": self.T2, "T3": self.T3,
                "V1": self.V1, "V2": self.V2, "V3": self.V3}

    def to_json(self) -> dict:
        part = self.partition
        return {
            "partition": {"m": list(part.rows.values), "n": list(part.cols.values), "t": part.t,
                          "row_layout": list(part.row_layout), "col_layout": list(part.col_layout)},
            "transforms": {k: matrix_to_json(v) for k, v in self.transforms().items()},
            "SA": matrix_to_json(self.SA),
        }

    def reconstructions(self) -> dict:
        sb, sc, sd, se, sf, sg = self.patterns
        return {
            "A": mat_prod(self.P, self.SA, self.Q),
            "B": mat_prod(self.P, sb, self.T1),
            "C": mat_prod(self.P, sc, self.T2),
            "D": mat_prod(self.P, sd, self.T3),
            "E": mat_prod(self.V1, se, self.Q),
            "F": mat_prod(self.V2, sf, self.Q),
            "G": mat_prod(self.V3, sg, self.Q),
        }


def extract_block(d: SevenDecomposition, i: int, j: int) -> QMatrix:
    if not (1 <= i <= 11 and 1 <= j <= 11):
        raise BlockIndexError(f"block index ({i}, {j}) outside 1..11")
    return d.blocks[i - 1][j - 1]


def _corner_swap(size: int, t: int) -> QMatrix:
    """Permutation moving the first t coordinates to the end (acting on rows)."""
    order = list(range(t, size)) + list(range(t))
    return QMatrix.identity(size).select(order)


def t_defect(inst: Instance) -> int:
    """r[A B C D; E 0 0 0; F 0 0 0; G 0 0 0] - r[B C D] - r[E; F; G]."""
    a, b, c, d, e, f, g = inst.matrices()
    dims = inst.dims
    big = block_matrix(
        [[a, b, c, d], [e, None, None, None], [f, None, None, None], [g, None, None, None]],
        [dims.m, dims.q1, dims.q2, dims.q3], [dims.n, dims.p1, dims.p2, dims.p3])
    r_bcd = hstack(b, c, d, rows=dims.m).rank()
    r_efg = vstack(e, f, g, cols=dims.n).rank()
    return big.rank() - r_bcd - r_efg


def decompose_seven(a: QMatrix, b: QMatrix, c: QMatrix, d: QMatrix,
                    e: QMatrix, f: QMatrix, g: QMatrix) -> SevenDecomposition:
    inst = Instance(a, b, c, d, e, f, g)
    return decompose_instance(inst)


def decompose_instance(inst: Instance) -> SevenDecomposition:
    a = inst.A
    m, n = a.shape
    rowdec: TripleDecomposition = triple_row_decompose(inst.B, inst.C, inst.D)
    coldec: TripleDecomposition = triple_col_decompose(inst.E, inst.F, inst.G)
    rb, re_ = rowdec.sizes.total_rank, coldec.sizes.total_rank
    P1, Q1 = rowdec.P, coldec.P
    A1 = mat_prod(inverse(P1), a, inverse(Q1))

    corner = A1.submatrix(rb, m, re_, n)
    cf = canonical_form(corner)
    t = cf.r
    swap_r = _corner_swap(m - rb, t)
    swap_c = _corner_swap(n - re_, t).H
    P2 = swap_r @ cf.P
    Q2 = cf.Q @ swap_c
    A2 = mat_prod(block_diag(QMatrix.identity(rb), P2), A1, block_diag(QMatrix.identity(re_), Q2))

    # clear block column 11 in rows 1..9 and block row 11 in columns 1..9
    top_right = A2.submatrix(0, rb, n - t, n)
    bottom_left = A2.submatrix(m - t, m, 0, re_)
    mid_r, mid_c = m - rb - t, n - re_ - t
    P3inv = block_matrix([[QMatrix.identity(rb), None, top_right],
                          [None, QMatrix.identity(mid_r), None],
                          [None, None, QMatrix.identity(t)]],
                         [rb, mid_r, t], [rb, mid_r, t])
    Q3inv = block_matrix([[QMatrix.identity(re_), None, None],
                          [None, QMatrix.identity(mid_c), None],
                          [bottom_left, None, QMatrix.identity(t)]],
                         [re_, mid_c, t], [re_, mid_c, t])
    P3 = _unipotent_inverse(P3inv)
    Q3 = _unipotent_inverse(Q3inv)
    SA = mat_prod(P3, A2, Q3)

    P = mat_prod(P1, block_diag(QMatrix.identity(rb), inverse(P2)), P3inv)
    Q = mat_prod(Q3inv, block_diag(QMatrix.identity(re_), inverse(Q2)), Q1)
    part = BlockPartition(rowdec.sizes, coldec.sizes, t, m, n)
    dec = SevenDecomposition(P, Q, rowdec.T1, rowdec.T2, rowdec.T3,
                             coldec.T1, coldec.T2, coldec.T3, SA, part, inst)
    report = verify_decomposition(dec, inst)
    if not report.passed:
        raise InternalInconsistency("decomposition failed its own checks: "
                                    + ", ".join(report.failures()))
    return dec


def _unipotent_inverse(u: QMatrix) -> QMatrix:
    # I + N with N^2 = 0 here, so the inverse is I - N
    eye = QMatrix.identity(u.rows)
    return eye - (u - eye)


# verification ---------------------------------------------------------------


@dataclass
class CheckReport:
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list:
        return [name for name, ok, _ in self.checks if not ok]

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in self.checks]}


def _sa_structure(d: SevenDecomposition, report: CheckReport) -> None:
    t = d.partition.t
    blk = d.blocks
    report.add("S_A block (10,10) is zero", blk[9][9].is_zero())
    report.add("S_A block (10,11) is zero", blk[9][10].is_zero())
    report.add("S_A block (11,10) is zero", blk[10][9].is_zero())
    report.add("S_A block (11,11) is the identity", blk[10][10] == QMatrix.identity(t))
    report.add("S_A blocks (i,11), i<=9, are zero", all(blk[i][10].is_zero() for i in range(9)))
    report.add("S_A blocks (11,j), j<=9, are zero", all(blk[10][j].is_zero() for j in range(9)))


def verify_decomposition(d: SevenDecomposition, inputs: Instance | None = None) -> CheckReport:
    """Check every identity, pattern and size relation; never raises on failure."""
    inputs = inputs if inputs is not None else d.inputs
    report = CheckReport()
    part = d.partition
    dims = inputs.dims
    shapes_ok = (
        d.P.shape == (dims.m, dims.m) and d.Q.shape == (dims.n, dims.n)
        and d.T1.shape == (dims.p1,) * 2 and d.T2.shape == (dims.p2,) * 2
        and d.T3.shape == (dims.p3,) * 2 and d.V1.shape == (dims.q1,) * 2
        and d.V2.shape == (dims.q2,) * 2 and d.V3.shape == (dims.q3,) * 2
        and d.SA.shape == (dims.m, dims.n))
    report.add("transform shapes", shapes_ok)
    lay_ok = (sum(part.row_layout) == dims.m and sum(part.col_layout) == dims.n
              and min(part.row_layout + part.col_layout) >= 0)
    report.add("partition layouts cover the matrix", lay_ok)
    if not (shapes_ok and lay_ok):
        return report
    for name, mat in d.transforms().items():
        report.add(f"{name} invertible", mat.rank() == mat.rows)
    try:
        recon = d.reconstructions()
    except DimensionError as exc:
        report.add("patterns fit the transforms", False, str(exc))
        return report
    for name, mat in zip("ABCDEFG", inputs.matrices()):
        report.add(f"{name} reconstruction", recon[name] == mat)
    _sa_structure(d, report)
    rows_expected = row_block_sizes_from_ranks(inputs.B, inputs.C, inputs.D)
    cols_expected = col_block_sizes_from_ranks(inputs.E, inputs.F, inputs.G)
    report.add("row sizes m1..m8 match the rank formulas", rows_expected == part.rows,
               f"observed {part.rows.values}, formula {rows_expected.values}")
    report.add("column sizes n1..n8 match the rank formulas", cols_expected == part.cols,
               f"observed {part.cols.values}, formula {cols_expected.values}")
    t_formula = t_defect(inputs)
    report.add("t matches the rank formula", t_formula == part.t,
               f"observed {part.t}, formula {t_formula}")
    return report

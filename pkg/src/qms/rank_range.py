"""Minimal and maximal ranks of the unknowns over all solutions.

Two equations are covered:

* three-term:  B X E + C Y F + D Z G = A
* four-term:   B X + W E + C Y F + D Z G = A

Every range is computed twice. The *direct* path evaluates closed formulas
built from ranks of block matrices of the seven inputs (``r_{d0ab0|da00c}``
style patterns). The *internal* path works on the blocks A_ij of the
simultaneous decomposition and the block sizes m_i, n_i, following the
chain of completion arguments that produces the formulas. The two must
agree exactly; the test suite checks this on seeded instances.

Patterns are written as literal grids: ``P("d0ab0", "da00c")`` is the block
matrix [[D, 0, A, B, 0], [D, A, 0, 0, C]] with zero blocks sized from the
letters sharing their row and column.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .completion import RankRange
from .errors import InconsistentSystem, InternalInconsistency, PatternError
from .instance import Instance
from .matrix import QMatrix, block_matrix
from .seven_decomp import SevenDecomposition, decompose_instance
from .solvers import check_consistency_four, check_consistency_three, parse_cell

UNKNOWNS = {"three": ("X", "Y", "Z"), "four": ("X", "W", "Y", "Z")}
TOKENS = "abcdefg0"


# patterns -------------------------------------------------------------------


@dataclass(frozen=True)
class RankPattern:
    """Rows of tokens from ``abcdefg0``; letters stand for the seven inputs."""

    grid: tuple

    def __post_init__(self):
        if not self.grid or not self.grid[0]:
            raise PatternError("empty pattern")
        width = len(self.grid[0])
        for row in self.grid:
            if len(row) != width:
                raise PatternError(f"ragged pattern {self.text}")
            for tok in row:
                if tok not in TOKENS:
                    raise PatternError(f"unknown token {tok!r} in {self.text}")

    @classmethod
    def parse(cls, text: str) -> "RankPattern":
        """``"d0ab0|da00c"`` -> grid; used for user input and cross-checks."""
        return cls(tuple(tuple(row) for row in text.strip().split("|")))

    @property
    def text(self) -> str:
        return "|".join("".join(row) for row in self.grid)

    def __str__(self) -> str:
        return f"r_{{{self.text}}}"


def P(*rows: str) -> RankPattern:
    return RankPattern(tuple(tuple(r) for r in rows))


def _row_count(inst: Instance, tok: str) -> int:
    d = inst.dims
    return {"a": d.m, "b": d.m, "c": d.m, "d": d.m, "e": d.q1, "f": d.q2, "g": d.q3}[tok]


def _col_count(inst: Instance, tok: str) -> int:
    d = inst.dims
    return {"a": d.n, "e": d.n, "f": d.n, "g": d.n, "b": d.p1, "c": d.p2, "d": d.p3}[tok]


def _infer(sizes: list, where: str) -> int:
    known = set(sizes)
    if not known:
        raise PatternError(f"{where} has no letter to fix its size")
    if len(known) > 1:
        raise PatternError(f"{where} mixes sizes {sorted(known)}")
    return known.pop()


def assemble(p: RankPattern, inst: Instance) -> QMatrix:
    mats = dict(zip("abcdefg", inst.matrices()))
    heights = [_infer([_row_count(inst, t) for t in row if t != "0"], f"row {i + 1} of {p.text}")
               for i, row in enumerate(p.grid)]
    widths = [_infer([_col_count(inst, row[j]) for row in p.grid if row[j] != "0"],
                     f"column {j + 1} of {p.text}") for j in range(len(p.grid[0]))]
    grid = [[None if t == "0" else mats[t] for t in row] for row in p.grid]
    return block_matrix(grid, heights, widths)


class PatternRanks:
    """Memoized ``r_{...}`` values for one instance."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self._cache: dict = {}

    def __call__(self, p: RankPattern) -> int:
        if p not in self._cache:
            self._cache[p] = assemble(p, self.inst).rank()
        return self._cache[p]


# formula tables -------------------------------------------------------------
#
# A linear expression is a tuple of (coefficient, item) with item either a
# dimension name (m, n, p1..q3) or a RankPattern.

b, c, d_, e, f, g = (P(x) for x in "bcdefg")
bc, bd, cd, bcd = P("bc"), P("bd"), P("cd"), P("bcd")
e_f, e_g, f_g, e_f_g = P("e", "f"), P("e", "g"), P("f", "g"), P("e", "f", "g")
GG_E0_0F = P("gg", "e0", "0f")
DB0_D0C = P("db0", "d0c")


def _lin(*items) -> tuple:
    """Sum of items; wrap an item in ``_neg`` to subtract it."""
    out = []
    for it in items:
        out.append(it if isinstance(it, tuple) else (1, it))
    return tuple(out)


def _neg(item) -> tuple:
    return (-1, item)


@dataclass(frozen=True)
class RangeFormula:
    """max = min(max_terms); min = base + combine(branches)."""

    unknown: str
    equation: str
    max_terms: tuple
    min_base: tuple
    min_branches: tuple = ()
    combine: str = "max"


FORMULAS = {
    ("three", "Z"): RangeFormula(
        "Z", "three",
        max_terms=(
            _lin("p3"), _lin("q3"),
            _lin("p3", "q3", P("a", "e", "f"), _neg(d_), _neg(e_f_g)),
            _lin("p3", "q3", P("abc"), _neg(g), _neg(bcd)),
            _lin("p3", "q3", P("d0ab0", "da00c", "0e000", "00f00"), _neg(GG_E0_0F), _neg(bd), _neg(cd)),
            _lin("p3", "q3", P("ac", "e0"), _neg(cd), _neg(e_g)),
            _lin("p3", "q3", P("ab", "f0"), _neg(f_g), _neg(bd)),
            _lin("p3", "q3", P("gg00", "0ab0", "a00c", "e000", "0f00"), _neg(DB0_D0C), _neg(e_g), _neg(f_g)),
        ),
        min_base=_lin(
            P("d0ab0", "da00c", "0e000", "00f00"), P("gg00", "0ab0", "a00c", "e000", "0f00"),
            P("abc"), P("a", "e", "f"), bd, e_g, bc, e_f,
            _neg(P("d0ab00", "da00cb", "0e0000", "00f000")),
            _neg(P("gg00", "0ab0", "a00c", "e000", "0f00", "0e00")),
        ),
        min_branches=(
            _lin(P("ac", "e0"), _neg(P("d0ab0", "da00c", "0e000", "00f00", "00e00")),
                 _neg(P("gg000", "0ab0c", "a00c0", "e0000", "0f000"))),
            _lin(P("ab", "f0"), _neg(P("d0ab0", "da00c", "0e000", "00f00", "0f000")),
                 _neg(P("gg000", "0ab00", "a00cb", "e0000", "0f000"))),
        ),
    ),
    ("three", "X"): RangeFormula(
        "X", "three",
        max_terms=(
            _lin("p1"), _lin("q1"),
            _lin("p1", "q1", P("a", "f", "g"), _neg(b), _neg(e_f_g)),
            _lin("p1", "q1", P("acd"), _neg(e), _neg(bcd)),
            _lin("p1", "q1", P("b0ad0", "ba00c", "0g000", "00f00"), _neg(GG_E0_0F), _neg(bd), _neg(bc)),
            _lin("p1", "q1", P("ac", "g0"), _neg(bc), _neg(e_g)),
            _lin("p1", "q1", P("ad", "f0"), _neg(e_f), _neg(bd)),
            _lin("p1", "q1", P("ee00", "0ad0", "a00c", "g000", "0f00"), _neg(DB0_D0C), _neg(e_g), _neg(e_f)),
        ),
        min_base=_lin(
            P("b0ad0", "ba00c", "0g000", "00f00"), P("ee00", "0ad0", "a00c", "g000", "0f00"),
            P("acd"), P("a", "f", "g"), bd, e_g, cd, f_g,
            _neg(P("b0ad00", "ba00cd", "0g0000", "00f000")),
            _neg(P("ee00", "0ad0", "a00c", "g000", "0f00", "0g00")),
        ),
        min_branches=(
            _lin(P("ac", "g0"), _neg(P("b0ad0", "ba00c", "0g000", "00f00", "00g00")),
                 _neg(P("ee000", "0ad0c", "a00c0", "g0000", "0f000"))),
            _lin(P("ad", "f0"), _neg(P("b0ad0", "ba00c", "0g000", "00f00", "0f000")),
                 _neg(P("ee000", "0ad00", "a00cd", "g0000", "0f000"))),
        ),
    ),
    ("three", "Y"): RangeFormula(
        "Y", "three",
        max_terms=(
            _lin("p2"), _lin("q2"),
            _lin("p2", "q2", P("a", "e", "g"), _neg(c), _neg(e_f_g)),
            _lin("p2", "q2", P("abd"), _neg(f), _neg(bcd)),
            _lin("p2", "q2", P("c0ab0", "ca00d", "0e000", "00g00"), _neg(GG_E0_0F), _neg(bc), _neg(cd)),
            _lin("p2", "q2", P("ad", "e0"), _neg(cd), _neg(e_f)),
            _lin("p2", "q2", P("ab", "g0"), _neg(f_g), _neg(bc)),
            _lin("p2", "q2", P("ff00", "0ab0", "a00d", "e000", "0g00"), _neg(DB0_D0C), _neg(e_f), _neg(f_g)),
        ),
        min_base=_lin(
            P("c0ab0", "ca00d", "0e000", "00g00"), P("ff00", "0ab0", "a00d", "e000", "0g00"),
            P("abd"), P("a", "e", "g"), bc, e_f, bd, e_g,
            _neg(P("c0ab00", "ca00db", "0e0000", "00g000")),
            _neg(P("ff00", "0ab0", "a00d", "e000", "0g00", "0e00")),
        ),
        min_branches=(
            _lin(P("ad", "e0"), _neg(P("c0ab0", "ca00d", "0e000", "00g00", "00e00")),
                 _neg(P("ff000", "0ab0d", "a00d0", "e0000", "0g000"))),
            _lin(P("ab", "g0"), _neg(P("c0ab0", "ca00d", "0e000", "00g00", "0g000")),
                 _neg(P("ff000", "0ab00", "a00db", "e0000", "0g000"))),
        ),
    ),
    ("four", "X"): RangeFormula(
        "X", "four",
        max_terms=(
            _lin("p1"), _lin("n"),
            _lin("p1", P("acd", "e00"), _neg(bcd)),
            _lin("p1", P("a", "e", "f", "g"), _neg(b)),
            _lin("p1", P("b0ad0", "ba00c", "0g000", "00f00", "0e000", "00e00"), _neg(e_f_g), _neg(bc), _neg(bd)),
            _lin("p1", P("ac", "e0", "g0"), _neg(bc)),
            _lin("p1", P("ad", "e0", "f0"), _neg(bd)),
        ),
        min_base=_lin(
            P("a", "e", "f", "g"), P("acd", "e00"), _neg(e),
            _neg(P("b0ad00", "ba00cd", "0g0000", "00f000", "0e0000", "00e000")),
            bd, cd, P("b0ad0", "ba00c", "0g000", "00f00", "0e000", "00e00"), e_f_g,
        ),
        min_branches=(
            _lin(P("ac", "e0", "g0"), _neg(P("b0ad0", "ba00c", "0g000", "00f00", "00g00", "0e000", "00e00")),
                 _neg(P("ad0c", "a0c0", "e000", "f000", "g000"))),
            _lin(P("ad", "e0", "f0"), _neg(P("b0ad0", "ba00c", "0g000", "00f00", "0e000", "00e00", "0f000")),
                 _neg(P("ad00", "a0cd", "e000", "f000", "g000"))),
        ),
    ),
    ("four", "W"): RangeFormula(
        "W", "four",
        max_terms=(
            _lin("q1"), _lin("m"),
            _lin("q1", P("ab", "f0", "g0"), _neg(e_f_g)),
            _lin("q1", P("abcd"), _neg(e)),
            _lin("q1", P("ee0000", "0ad0b0", "a00c0b", "g00000", "0f0000"), _neg(bcd), _neg(e_f), _neg(e_g)),
            _lin("q1", P("abd", "f00"), _neg(e_f)),
            _lin("q1", P("abc", "g00"), _neg(e_g)),
        ),
        min_base=_lin(
            P("abcd"), P("ab", "f0", "g0"), _neg(b),
            _neg(P("ee0000", "0ad0b0", "a00c0b", "g00000", "0f0000", "0g0000")),
            e_g, f_g, P("ee0000", "0ad0b0", "a00c0b", "g00000", "0f0000"), bcd,
        ),
        min_branches=(
            _lin(P("abd", "f00"), _neg(P("ee00000", "0ad00b0", "a00cd0b", "g000000", "0f00000")),
                 _neg(P("aadcb", "g0000", "0f000", "f0000"))),
            _lin(P("abc", "g00"), _neg(P("ee00000", "0ad0b0c", "a00c0b0", "g000000", "0f00000")),
                 _neg(P("aabcd", "g0000", "0f000", "0g000"))),
        ),
    ),
    ("four", "Y"): RangeFormula(
        "Y", "four",
        max_terms=(
            _lin("p2"), _lin("q2"),
            _lin("p2", "q2", P("ab", "e0", "g0"), _neg(e_f_g), _neg(bc)),
            _lin("p2", "q2", P("abd", "e00"), _neg(e_f), _neg(bcd)),
        ),
        min_base=_lin(P("ab", "e0", "g0"), P("abd", "e00"), _neg(P("abd", "e00", "g00")), _neg(b), _neg(e)),
    ),
    ("four", "Z"): RangeFormula(
        "Z", "four",
        max_terms=(
            _lin("p3"), _lin("q3"),
            _lin("p3", "q3", P("ab", "e0", "f0"), _neg(e_f_g), _neg(bd)),
            _lin("p3", "q3", P("abc", "e00"), _neg(e_g), _neg(bcd)),
        ),
        min_base=_lin(P("ab", "e0", "f0"), P("abc", "e00"), _neg(P("abc", "e00", "f00")), _neg(b), _neg(e)),
    ),
}


# evaluation -------------------------------------------------------------------


def _dim_values(inst: Instance) -> dict:
    dm = inst.dims
    return {"m": dm.m, "n": dm.n, "p1": dm.p1, "p2": dm.p2, "p3": dm.p3,
            "q1": dm.q1, "q2": dm.q2, "q3": dm.q3}


def evaluate(expr: tuple, ranks: PatternRanks, names: dict) -> int:
    total = 0
    for coef, item in expr:
        total += coef * (ranks(item) if isinstance(item, RankPattern) else names[item])
    return total


@dataclass(frozen=True)
class RankRangeReport:
    unknown: str
    equation: str
    min: int
    max: int
    max_terms: tuple
    min_base: int
    min_branches: tuple
    path: str = "direct"

    @property
    def range(self) -> RankRange:
        return RankRange(self.min, self.max)

    def to_json(self) -> dict:
        return {"unknown": self.unknown, "equation": self.equation, "path": self.path,
                "min": self.min, "max": self.max, "max_terms": list(self.max_terms),
                "min_base": self.min_base, "min_branches": list(self.min_branches)}


def _require_consistent(inst: Instance, equation: str,
                        dec: SevenDecomposition | None) -> SevenDecomposition:
    dec = dec if dec is not None else decompose_instance(inst)
    check = check_consistency_three if equation == "three" else check_consistency_four
    report = check(dec)
    if not report.consistent:
        raise InconsistentSystem(f"the {equation}-term equation has no solution", report)
    return dec


def direct_report(inst: Instance, equation: str, unknown: str,
                  dec: SevenDecomposition | None = None, combine: str | None = None,
                  check: bool = True) -> RankRangeReport:
    """Evaluate the closed formula for one unknown.

    ``combine`` overrides how the two min branches are merged ("max" or
    "min"); by default the table entry decides.
    """
    if unknown not in UNKNOWNS[equation]:
        raise ValueError(f"{unknown} is not an unknown of the {equation}-term equation")
    if check:
        _require_consistent(inst, equation, dec)
    fm = FORMULAS[(equation, unknown)]
    ranks, names = PatternRanks(inst), _dim_values(inst)
    terms = tuple(evaluate(t, ranks, names) for t in fm.max_terms)
    base = evaluate(fm.min_base, ranks, names)
    branches = tuple(evaluate(t, ranks, names) for t in fm.min_branches)
    how = combine or fm.combine
    lo = base + ((max if how == "max" else min)(branches) if branches else 0)
    return RankRangeReport(unknown, equation, lo, min(terms), terms, base, branches)


def rank_range_Z_three(inst: Instance, dec: SevenDecomposition | None = None) -> RankRange:
    return direct_report(inst, "three", "Z", dec).range


def rank_range_X_three(inst: Instance, dec: SevenDecomposition | None = None) -> RankRange:
    return direct_report(inst, "three", "X", dec).range


def rank_range_Y_three(inst: Instance, dec: SevenDecomposition | None = None) -> RankRange:
    return direct_report(inst, "three", "Y", dec).range


def rank_range_X_four(inst: Instance, dec: SevenDecomposition | None = None) -> RankRange:
    return direct_report(inst, "four", "X", dec).range


def rank_range_W_four(inst: Instance, dec: SevenDecomposition | None = None) -> RankRange:
    return direct_report(inst, "four", "W", dec).range


def rank_range_YZ_four(inst: Instance, dec: SevenDecomposition | None = None) -> tuple:
    dec = _require_consistent(inst, "four", dec)
    return (direct_report(inst, "four", "Y", dec, check=False).range,
            direct_report(inst, "four", "Z", dec, check=False).range)


# internal path ------------------------------------------------------------------


class _Blocks:
    """Ranks of block matrices of S_A given as rows of cell expressions."""

    def __init__(self, dec: SevenDecomposition):
        self.dec = dec
        self.rows = dec.partition.row_layout
        self.cols = dec.partition.col_layout
        self._cache: dict = {}

    def cell(self, text: str) -> QMatrix:
        terms = parse_cell(text)
        _, _, i, j = terms[0]
        acc = QMatrix.zeros(self.rows[i - 1], self.cols[j - 1])
        for sign, ref, i, j in terms:
            if ref != "A":
                raise ValueError(f"only A blocks may appear here, got {text!r}")
            blk = self.dec.block(i, j)
            acc = acc + blk if sign > 0 else acc - blk
        return acc

    def r(self, *rows) -> int:
        key = tuple(tuple(r) for r in rows)
        if key not in self._cache:
            grid = [[self.cell(t) for t in row] for row in key]
            heights = [row[0].rows for row in grid]
            widths = [cell.cols for cell in grid[0]]
            self._cache[key] = block_matrix(grid, heights, widths).rank()
        return self._cache[key]


def _sizes(dec: SevenDecomposition) -> tuple:
    part = dec.partition
    m = {k: part.rows[k] for k in range(1, 9)}
    n = {k: part.cols[k] for k in range(1, 9)}
    return m, n


def _z_three_chain(dec: SevenDecomposition) -> tuple:
    """(max terms s1..s6 with p3, q3; min branches s7, s8) for Z of the three-term equation."""
    inst, bl = dec.inputs, _Blocks(dec)
    m, n = _sizes(dec)
    p3, q3 = inst.dims.p3, inst.dims.q3
    base = p3 + q3 - inst.D.rank() - inst.G.rank()
    col5 = bl.r(["A99"], ["A69"], ["A79"], ["A39"], ["A19"])
    col4 = bl.r(["A99"], ["A69"], ["A79"], ["A39"])
    row5 = bl.r(["A99", "A96", "A97", "A93", "A91"])
    row4 = bl.r(["A99", "A96", "A97", "A93"])
    top = bl.r(["A99", "A96", "A97", "A93"], ["A69", "A64", "A47", "A63"])
    left = bl.r(["A99", "A96"], ["A69", "A64"], ["A79", "A74"], ["A39", "A36"])
    h_b = bl.r(["A99", "A96", "A97"], ["A69", "A64", "A47"], ["A39", "A36", "A37"])
    h_c = bl.r(["A99", "A96", "A93"], ["A69", "A64", "A63"], ["A79", "A74", "A73"])
    s = [
        base + n[1] + n[3] + n[4] + n[6] + col5,
        base + m[1] + m[3] + m[4] + m[6] + row5,
        base + m[1] + n[1] + m[3] + m[6] + top,
        base + m[1] + n[1] + n[3] + m[6] + h_b,
        base + m[1] + n[1] + m[3] + n[6] + h_c,
        base + m[1] + n[1] + n[3] + n[6] + left,
    ]
    common = top + left + col5 - col4 + row5 - row4
    s7 = common + h_b - bl.r(["A99", "A96", "A97"], ["A69", "A64", "A47"]) \
        - bl.r(["A99", "A96"], ["A69", "A64"], ["A39", "A36"])
    s8 = common + h_c - bl.r(["A99", "A96", "A93"], ["A69", "A64", "A63"]) \
        - bl.r(["A99", "A96"], ["A69", "A64"], ["A79", "A74"])
    return (p3, q3, *s), (s7, s8)


def _x_four_chain(dec: SevenDecomposition) -> tuple:
    """(max terms p1, n, t1..t6; min branches t7, t8) for X of the four-term equation."""
    inst, bl = dec.inputs, _Blocks(dec)
    m, n = _sizes(dec)
    p1 = inst.dims.p1
    base = p1 - inst.B.rank() + inst.E.rank()
    row5 = bl.r(["A56", "A57", "A58", "A59", "A5,10"])
    col10 = bl.r(["A1,10"], ["A2,10"], ["A3,10"], ["A4,10"], ["A5,10"])
    col10s = bl.r(["A2,10"], ["A3,10"], ["A4,10"], ["A5,10"])
    top = bl.r(["A48", "A49-A69", "A4,10"], ["A58", "A59", "A5,10"])
    h_b = bl.r(["A38", "A3,10"], ["A48", "A4,10"], ["A58", "A5,10"])
    h_c = bl.r(["A29", "A2,10"], ["A49-A69", "A4,10"], ["A59", "A5,10"])
    t = [
        base + m[1] + m[2] + m[3] + m[4] + row5,
        base + n[4] + n[6] + n[7] + n[8] + col10,
        base + n[4] + n[6] + m[1] + m[2] + m[3] + top,
        base + n[4] + n[6] + m[1] + m[2] + n[8] + h_b,
        base + n[4] + n[6] + m[1] + m[3] + n[7] + h_c,
        base + n[4] + n[6] + m[1] + n[7] + n[8] + col10s,
    ]
    common = col10 + row5 + top - bl.r(["A58", "A59", "A5,10"])
    t7 = common + h_b - bl.r(["A48", "A4,10"], ["A58", "A5,10"]) \
        - bl.r(["A3,10"], ["A4,10"], ["A5,10"])
    t8 = common + h_c - bl.r(["A49-A69", "A4,10"], ["A59", "A5,10"]) \
        - bl.r(["A2,10"], ["A4,10"], ["A5,10"])
    return (p1, inst.dims.n, *t), (t7, t8)


def _z_four_chain(dec: SevenDecomposition) -> tuple:
    """Z of the four-term equation.

    In the parametrized Z^ only the blocks A99, A96, A97 (first block row)
    and A69, A79 (first block column) are fixed; every other block carries
    its own free parameter. The corner is an L-shaped completion problem
    and the remaining rows and columns are free borders.
    """
    inst, bl = dec.inputs, _Blocks(dec)
    m, n = _sizes(dec)
    p3, q3 = inst.dims.p3, inst.dims.q3
    row = bl.r(["A99", "A96", "A97"])
    col = bl.r(["A99"], ["A69"], ["A79"])
    border = (p3 - m[8] - m[4] - m[6]) + (q3 - n[8] - n[4] - n[6])
    terms = (p3, q3, border + m[4] + m[6] + row, border + n[4] + n[6] + col)
    return terms, (row + col - bl.r(["A99"]),)


def _y_four_chain(dec: SevenDecomposition) -> tuple:
    """Y of the four-term equation.

    The fixed blocks of Y^ are the last block row (A86, A87, A88) and the
    last block column (A68, A78, A88) of its leading 3 x 3 corner; the
    same L-shape argument as for Z applies with the corner at A88.
    """
    inst, bl = dec.inputs, _Blocks(dec)
    m, n = _sizes(dec)
    p2, q2 = inst.dims.p2, inst.dims.q2
    row = bl.r(["A86", "A87", "A88"])
    col = bl.r(["A68"], ["A78"], ["A88"])
    border = (p2 - m[4] - m[6] - m[7]) + (q2 - n[4] - n[6] - n[7])
    terms = (p2, q2, border + m[4] + m[6] + row, border + n[4] + n[6] + col)
    return terms, (row + col - bl.r(["A88"]),)


def swap_for(unknown: str, inst: Instance) -> Instance:
    """Relabel the three-term equation so that ``unknown`` plays the role of Z."""
    if unknown == "X":
        return Instance(inst.A, inst.D, inst.C, inst.B, inst.G, inst.F, inst.E)
    if unknown == "Y":
        return Instance(inst.A, inst.B, inst.D, inst.C, inst.E, inst.G, inst.F)
    return inst


def internal_report(dec: SevenDecomposition, equation: str, unknown: str,
                    check: bool = True) -> RankRangeReport:
    if unknown not in UNKNOWNS[equation]:
        raise ValueError(f"{unknown} is not an unknown of the {equation}-term equation")
    if check:
        _require_consistent(dec.inputs, equation, dec)
    if equation == "three":
        # X and Y reduce to Z after swapping the roles of the coefficients
        work = dec if unknown == "Z" else decompose_instance(swap_for(unknown, dec.inputs))
        terms, branches = _z_three_chain(work)
    elif unknown == "X":
        terms, branches = _x_four_chain(dec)
    elif unknown == "W":
        # W of the equation is the conjugate transpose of X of the adjoint equation
        terms, branches = _x_four_chain(decompose_instance(dec.inputs.conj_transpose()))
    elif unknown == "Y":
        terms, branches = _y_four_chain(dec)
    else:
        terms, branches = _z_four_chain(dec)
    return RankRangeReport(unknown, equation, max(branches), min(terms), terms,
                           0, branches, path="internal")


def rank_range_internal_path(dec: SevenDecomposition, which: str,
                             equation: str | None = None) -> RankRange:
    """``which`` is "X", "Y", "Z" or "W"; W implies the four-term equation."""
    equation = equation or ("four" if which == "W" else "three")
    return internal_report(dec, equation, which).range


def rank_range(inst: Instance, equation: str, unknown: str,
               dec: SevenDecomposition | None = None) -> RankRangeReport:
    """Direct-formula report, after checking that the internal path agrees."""
    dec = _require_consistent(inst, equation, dec)
    direct = direct_report(inst, equation, unknown, dec, check=False)
    inner = internal_report(dec, equation, unknown, check=False)
    if (direct.min, direct.max) != (inner.min, inner.max):
        raise InternalInconsistency(
            f"{unknown}: formula gives [{direct.min}, {direct.max}], "
            f"decomposition gives [{inner.min}, {inner.max}]")
    return direct


# block rank identities ------------------------------------------------------------


@dataclass(frozen=True)
class BlockIdentity:
    label: str
    equation: str
    blocks: tuple
    rhs: tuple


def _ident(label, equation, blocks, *rhs) -> BlockIdentity:
    return BlockIdentity(label, equation, tuple(tuple(r) for r in blocks), _lin(*rhs))


def _m(*ks) -> tuple:
    return tuple(_neg(f"m{k}") for k in ks)


def _n(*ks) -> tuple:
    return tuple(_neg(f"n{k}") for k in ks)


IDENTITIES = (
    _ident("Z3 left", "three", [["A99", "A96"], ["A69", "A64"], ["A79", "A74"], ["A39", "A36"]],
           P("gg00", "0ab0", "a00c", "e000", "0f00"), _neg(e), _neg(f), _neg(b), _neg(c), *_n(3, 4, 6, 8)),
    _ident("Z3 top", "three", [["A99", "A96", "A97", "A93"], ["A69", "A64", "A47", "A63"]],
           P("d0ab0", "da00c", "0e000", "00f00"), _neg(e), _neg(f), _neg(b), _neg(c), *_m(3, 4, 6, 8)),
    _ident("Z3 row", "three", [["A99", "A96", "A97", "A93", "A91"]], P("abc"), _neg(bc)),
    _ident("Z3 column", "three", [["A99"], ["A69"], ["A79"], ["A39"], ["A19"]],
           P("a", "e", "f"), _neg(e_f)),
    _ident("Z3 short column", "three", [["A99"], ["A69"], ["A79"], ["A39"]],
           P("gg00", "0ab0", "a00c", "e000", "0f00", "0e00"), _neg(e_f), _neg(e), _neg(b), _neg(c),
           *_n(4, 6, 8)),
    _ident("Z3 short row", "three", [["A99", "A96", "A97", "A93"]],
           P("d0ab00", "da00cb", "0e0000", "00f000"), _neg(e), _neg(f), _neg(b), _neg(bc),
           *_m(4, 6, 8)),
    _ident("Z3 corner c", "three", [["A99", "A96", "A93"], ["A69", "A64", "A63"], ["A79", "A74", "A73"]],
           P("ab", "f0"), _neg(b), _neg(f)),
    _ident("Z3 corner b", "three", [["A99", "A96", "A97"], ["A69", "A64", "A47"], ["A39", "A36", "A37"]],
           P("ac", "e0"), _neg(e), _neg(c)),
    _ident("Z3 corner b left", "three", [["A99", "A96"], ["A69", "A64"], ["A39", "A36"]],
           P("gg000", "0ab0c", "a00c0", "e0000", "0f000"), _neg(e), _neg(f), _neg(c), _neg(bc),
           *_n(3, 4, 6, 8)),
    _ident("Z3 corner c left", "three", [["A99", "A96"], ["A69", "A64"], ["A79", "A74"]],
           P("gg000", "0ab00", "a00cb", "e0000", "0f000"), _neg(e), _neg(f), _neg(b), _neg(bc),
           *_n(3, 4, 6, 8)),
    _ident("Z3 corner b top", "three", [["A99", "A96", "A97"], ["A69", "A64", "A47"]],
           P("d0ab0", "da00c", "0e000", "00f00", "00e00"), _neg(b), _neg(c), _neg(e), _neg(e_f),
           *_m(3, 4, 6, 8)),
    _ident("Z3 corner c top", "three", [["A99", "A96", "A93"], ["A69", "A64", "A63"]],
           P("d0ab0", "da00c", "0e000", "00f00", "0f000"), _neg(b), _neg(c), _neg(f), _neg(e_f),
           *_m(3, 4, 6, 8)),
    _ident("X4 row", "four", [["A56", "A57", "A58", "A59", "A5,10"]],
           P("acd", "e00"), _neg(cd), _neg(e)),
    _ident("X4 column", "four", [["A1,10"], ["A2,10"], ["A3,10"], ["A4,10"], ["A5,10"]],
           P("a", "e", "f", "g"), _neg(e_f_g)),
    _ident("X4 top", "four", [["A48", "A49-A69", "A4,10"], ["A58", "A59", "A5,10"]],
           P("b0ad0", "ba00c", "0g000", "00f00", "0e000", "00e00"), _neg(c), _neg(d_), _neg(e_f),
           _neg(e_g), *_m(2, 3, 4, 5)),
    _ident("X4 corner b", "four", [["A38", "A3,10"], ["A48", "A4,10"], ["A58", "A5,10"]],
           P("ac", "e0", "g0"), _neg(e_g), _neg(c)),
    _ident("X4 corner c", "four", [["A29", "A2,10"], ["A49-A69", "A4,10"], ["A59", "A5,10"]],
           P("ad", "e0", "f0"), _neg(d_), _neg(e_f)),
    _ident("X4 column 3-5", "four", [["A3,10"], ["A4,10"], ["A5,10"]],
           P("ad0c", "a0c0", "e000", "f000", "g000"), _neg(cd), _neg(c), _neg(e_f_g)),
    _ident("X4 column 2,4,5", "four", [["A2,10"], ["A4,10"], ["A5,10"]],
           P("ad00", "a0cd", "e000", "f000", "g000"), _neg(cd), _neg(d_), _neg(e_f_g)),
    _ident("X4 short row", "four", [["A58", "A59", "A5,10"]],
           P("b0ad00", "ba00cd", "0g0000", "00f000", "0e0000", "00e000"), _neg(bd), _neg(cd),
           _neg(e_f), _neg(e_g)),
    _ident("X4 corner c inner", "four", [["A49-A69", "A4,10"], ["A59", "A5,10"]],
           P("b0ad0", "ba00c", "0g000", "00f00", "0e000", "00e00", "0f000"), _neg(c), _neg(d_),
           _neg(e_f_g), _neg(e_f), *_m(2, 3, 4, 5)),
    _ident("X4 corner b inner", "four", [["A48", "A4,10"], ["A58", "A5,10"]],
           P("b0ad0", "ba00c", "0g000", "00f00", "00g00", "0e000", "00e00"), _neg(c), _neg(d_),
           _neg(e_f_g), _neg(e_g), *_m(2, 3, 4, 5)),
)


@dataclass
class IdentityReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.results)

    def failures(self) -> list:
        return [label for label, _, _, ok in self.results if not ok]

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "identities": [{"name": lab, "lhs": lhs, "rhs": rhs, "passed": ok}
                               for lab, lhs, rhs, ok in self.results]}


def verify_block_rank_identities(dec: SevenDecomposition, equation: str | None = None) -> IdentityReport:
    """Compare ranks of S_A block submatrices with ranks of the input patterns.

    ``equation`` selects the three-term or four-term set; by default every
    set whose equation is consistent for these inputs is checked.
    """
    if equation is None:
        chosen = [eq for eq, chk in (("three", check_consistency_three), ("four", check_consistency_four))
                  if chk(dec).consistent]
    else:
        chosen = [equation]
    bl, ranks = _Blocks(dec), PatternRanks(dec.inputs)
    m, n = _sizes(dec)
    names = _dim_values(dec.inputs)
    names.update({f"m{k}": v for k, v in m.items()})
    names.update({f"n{k}": v for k, v in n.items()})
    report = IdentityReport()
    for ident in IDENTITIES:
        if ident.equation in chosen:
            lhs = bl.r(*ident.blocks)
            rhs = evaluate(ident.rhs, ranks, names)
            report.results.append((ident.label, lhs, rhs, lhs == rhs))
    return report

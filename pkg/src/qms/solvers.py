"""Solvability tests and general solutions of two linear matrix equations.

    three-term:  B X E + C Y F + D Z G = A
    four-term:   B X + W E + C Y F + D Z G = A

Both are reduced by the seven-matrix decomposition to block equations in
the transformed unknowns X^ = T1 X V1 (four-term: T1 X Q^-1),
W^ = P^-1 W V1, Y^ = T2 Y V2, Z^ = T3 Z V3. Each transformed unknown is
described below by a grid of cell expressions:

* ``"X11"`` in cell (1,1) of X^ is a free parameter (the cell's own name);
* anything else is a signed sum of blocks of S_A (``A..``) and of other
  cells (``X..``, ``W..``, ``Y..``, ``Z..``), e.g. ``"A61-A41+X41"``.

Two-digit block indices are written with a comma: ``"A1,10"``.
Every reference to an unknown points at a free cell, so the grids are
filled by placing the parameters first and then evaluating the rest.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InconsistentSystem, ParameterError
from .instance import matrix_to_json
from .matrix import QMatrix, block_matrix, inverse, mat_prod, random_matrix, split
from .seven_decomp import SevenDecomposition

_FREE = None  # marker for free cells in parsed grids
_TOKEN = re.compile(r"([+-]?)([AXYZW])(?:(\d+),(\d+)|(\d)(\d))")

# --- grids -------------------------------------------------------------------


def _frees(letter: str, row: int, ncols: int) -> tuple:
    return tuple(_name(letter, row, j) for j in range(1, ncols + 1))


def _name(letter: str, i: int, j: int) -> str:
    return f"{letter}{i}{j}" if i < 10 and j < 10 else f"{letter}{i},{j}"


THREE_TERM_GRIDS = {
    "X": {
        "rows": ("m1", "m2", "m3", "m4", "m5", "p1-rb"),
        "cols": ("n1", "n2", "n3", "n4", "n5", "q1-re"),
        "cells": (
            ("X11", "X12", "X13", "X14", "A15", "X16"),
            ("X21", "X22", "A23", "A24", "A25", "X26"),
            ("X31", "A32", "X33", "A34-A36", "A35", "X36"),
            ("X41", "A42", "A43-A63", "A44-A64", "A45", "X46"),
            ("A51", "A52", "A53", "A54", "A55", "X56"),
            _frees("X", 6, 6),
        ),
    },
    "Y": {
        "rows": ("m4", "m6", "m7", "m1", "m2", "p2-rc"),
        "cols": ("n4", "n6", "n7", "n1", "n2", "q2-rf"),
        "cells": (
            ("A66-A64", "A67-A47", "A68", "A61-A41+X41", "A62", "Y16"),
            ("A76-A74", "Y22", "A78", "Y24", "A72", "Y26"),
            ("A86", "A87", "A88", "A81", "A82", "Y36"),
            ("A16-A14+X14", "Y42", "A18", "Y44", "A12-X12", "Y46"),
            ("A26", "A27", "A28", "A21-X21", "A22-X22", "Y56"),
            _frees("Y", 6, 6),
        ),
    },
    "Z": {
        "rows": ("m8", "m4", "m6", "m3", "m1", "p3-rd"),
        "cols": ("n8", "n4", "n6", "n3", "n1", "q3-rg"),
        "cells": (
            ("A99", "A96", "A97", "A93", "A91", "Z16"),
            ("A69", "A64", "A47", "A63", "A41-X41", "Z26"),
            ("A79", "A74", "A77-Y22", "A73", "A71-Y24", "Z36"),
            ("A39", "A36", "A37", "A33-X33", "A31-X31", "Z46"),
            # X11 + Y44 + Z55 = A11 must hold, so Z55 cannot be free as well
            ("A19", "A14-X14", "A17-Y42", "A13-X13", "A11-X11-Y44", "Z56"),
            _frees("Z", 6, 6),
        ),
    },
}

FOUR_TERM_GRIDS = {
    "X": {
        "rows": ("m1", "m2", "m3", "m4", "m5", "p1-rb"),
        "cols": ("n1", "n2", "n3", "n4", "n5", "n4", "n6", "n7", "n8", "n-refg"),
        "cells": (
            _frees("X", 1, 9) + ("A1,10",),
            _frees("X", 2, 8) + ("A29", "A2,10"),
            _frees("X", 3, 7) + ("A38", "X39", "A3,10"),
            _frees("X", 4, 7) + ("A48", "A49-A69", "A4,10"),
            _frees("X", 5, 5) + ("A56", "A57", "A58", "A59", "A5,10"),
            _frees("X", 6, 10),
        ),
    },
    "W": {
        "rows": ("m1", "m2", "m3", "m4", "m5", "m4", "m6", "m7", "m8", "m-rbcd"),
        "cols": ("n1", "n2", "n3", "n4", "n5", "q1-re"),
        "cells": (
            ("W11", "W12", "W13", "W14", "A15-X15", "W16"),
            ("W21", "W22", "A23-X23", "A24-X24", "A25-X25", "W26"),
            ("W31", "A32-X32", "W33", "A34-X34-A36+X36", "A35-X35", "W36"),
            ("W41", "A42-X42", "A43-A63+W63-X43", "A44-A46+X46-X44", "A45-X45", "W46"),
            ("A51-X51", "A52-X52", "A53-X53", "A54-X54", "A55-X55", "W56"),
            ("W61", "W62", "W63", "A64-A46+X46", "A65", "W66"),
            ("W71", "W72", "W73", "W74", "A75", "W76"),
            ("W81", "W82", "A83", "A84", "A85", "W86"),
            ("W91", "A92", "W93", "A94-A96", "A95", "W96"),
            ("A10,1", "A10,2", "A10,3", "A10,4", "A10,5", "W10,6"),
        ),
    },
    "Y": {
        "rows": ("m4", "m6", "m7", "m1", "m2", "p2-rc"),
        "cols": ("n4", "n6", "n7", "n1", "n2", "q2-rf"),
        "cells": (
            ("A66-A46+X46", "A67-A47+X47", "A68", "A61-A41+X41+W41-W61", "A62-W62", "Y16"),
            ("A76-A74+W74", "Y22", "A78", "Y24", "A72-W72", "Y26"),
            ("A86", "A87", "A88", "A81-W81", "A82-W82", "Y36"),
            ("A16-A14+X14+W14-X16", "Y42", "A18-X18", "Y44", "A12-X12-W12", "Y46"),
            ("A26-X26", "A27-X27", "A28-X28", "A21-X21-W21", "A22-X22-W22", "Y56"),
            _frees("Y", 6, 6),
        ),
    },
    "Z": {
        "rows": ("m8", "m4", "m6", "m3", "m1", "p3-rd"),
        "cols": ("n8", "n4", "n6", "n3", "n1", "q3-rg"),
        "cells": (
            ("A99", "A96", "A97", "A93-W93", "A91-W91", "Z16"),
            ("A69", "A46-X46", "A47-X47", "A63-W63", "A41-X41-W41", "Z26"),
            ("A79", "A74-W74", "A77-Y22", "A73-W73", "A71-Y24-W71", "Z36"),
            ("A39-X39", "A36-X36", "A37-X37", "A33-X33-W33", "A31-X31-W31", "Z46"),
            ("A19-X19", "A14-X14-W14", "A17-X17-Y42", "A13-X13-W13", "A11-X11-W11-Y44", "Z56"),
            _frees("Z", 6, 6),
        ),
    },
}


def parse_cell(text: str) -> list:
    """``"A61-A41+X41"`` -> [(+1, 'A', 6, 1), (-1, 'A', 4, 1), (+1, 'X', 4, 1)]."""
    terms, pos = [], 0
    for mt in _TOKEN.finditer(text):
        if mt.start() != pos or (pos > 0 and not mt.group(1)):
            raise ValueError(f"malformed cell expression {text!r}")
        i = int(mt.group(3) or mt.group(5))
        j = int(mt.group(4) or mt.group(6))
        terms.append((-1 if mt.group(1) == "-" else 1, mt.group(2), i, j))
        pos = mt.end()
    if pos != len(text) or not terms:
        raise ValueError(f"malformed cell expression {text!r}")
    return terms


# --- sizes -------------------------------------------------------------------


def named_sizes(d: SevenDecomposition) -> dict:
    """Block sizes by the names used in the grid headers."""
    part, dims = d.partition, d.inputs.dims
    m, n = part.rows, part.cols
    sizes = {f"m{k}": m[k] for k in range(1, 9)}
    sizes.update({f"n{k}": n[k] for k in range(1, 9)})
    r_b = m[1] + m[2] + m[3] + m[4] + m[5]
    r_c = m[4] + m[6] + m[7] + m[1] + m[2]
    r_d = m[8] + m[4] + m[6] + m[3] + m[1]
    r_e = n[1] + n[2] + n[3] + n[4] + n[5]
    r_f = n[4] + n[6] + n[7] + n[1] + n[2]
    r_g = n[8] + n[4] + n[6] + n[3] + n[1]
    sizes.update({
        "p1-rb": dims.p1 - r_b, "p2-rc": dims.p2 - r_c, "p3-rd": dims.p3 - r_d,
        "q1-re": dims.q1 - r_e, "q2-rf": dims.q2 - r_f, "q3-rg": dims.q3 - r_g,
        "m-rbcd": part.row_layout[9] + part.t, "n-refg": part.col_layout[9] + part.t,
    })
    return sizes


# --- consistency ---------------------------------------------------------------


@dataclass
class ConsistencyReport:
    equation: str
    failed_conditions: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.failed_conditions

    def to_json(self) -> dict:
        return {"equation": self.equation, "consistent": self.consistent,
                "failed_conditions": [{"condition": c, "detail": dt}
                                      for c, dt in self.failed_conditions]}


def _block_summary(b: QMatrix) -> str:
    return f"{b.rows}x{b.cols} block with {sum(1 for q in b.entries() if not q.is_zero())} nonzero entries"


def _check_zero(d, report, i, j):
    blk = d.block(i, j)
    if not blk.is_zero():
        report.failed_conditions.append((f"{_name('A', i, j)}=0", _block_summary(blk)))


def _check_equal(d, report, a, b):
    x, y = d.block(*a), d.block(*b)
    if x != y:
        report.failed_conditions.append(
            (f"{_name('A', *a)}={_name('A', *b)}", _block_summary(x - y) + " in the difference"))


def _check_rank_condition(d, report):
    if d.partition.t != 0:
        report.failed_conditions.append(
            ("r[A B C D; E 0 0 0; F 0 0 0; G 0 0 0] = r[B C D] + r[E; F; G]",
             f"left side exceeds the right by t = {d.partition.t}"))


_THREE_ZERO = ((2, 9), (9, 2), (3, 8), (8, 3), (4, 8), (8, 4), (5, 6), (6, 5),
               (5, 7), (7, 5), (5, 8), (8, 5), (5, 9), (9, 5), (8, 9), (9, 8))


def check_consistency_three(d: SevenDecomposition) -> ConsistencyReport:
    report = ConsistencyReport("three")
    _check_rank_condition(d, report)
    for a, b in (((9, 4), (9, 6)), ((4, 9), (6, 9)), ((6, 4), (4, 6))):
        _check_equal(d, report, a, b)
    for i in range(1, 10):
        _check_zero(d, report, i, 10)
    for j in range(1, 10):
        _check_zero(d, report, 10, j)
    for i, j in _THREE_ZERO:
        _check_zero(d, report, i, j)
    return report


def check_consistency_four(d: SevenDecomposition) -> ConsistencyReport:
    report = ConsistencyReport("four")
    _check_rank_condition(d, report)
    _check_zero(d, report, 8, 9)
    _check_zero(d, report, 9, 8)
    for i in range(6, 10):
        _check_zero(d, report, i, 10)
    for j in range(6, 10):
        _check_zero(d, report, 10, j)
    return report


# --- solution families -----------------------------------------------------------


@dataclass(frozen=True)
class FreeSlot:
    name: str
    rows: int
    cols: int


class SolutionFamily:
    """All solutions of one equation: fixed cells plus free parameter slots.

    ``assemble(params)`` maps a dict ``{slot name: QMatrix}`` to the
    unknowns; missing slots default to zero only via ``zero_params()``.
    """

    def __init__(self, d: SevenDecomposition, equation: str):
        self.decomposition = d
        self.equation = equation
        self.grids = THREE_TERM_GRIDS if equation == "three" else FOUR_TERM_GRIDS
        self.order = ("X", "Y", "Z") if equation == "three" else ("X", "W", "Y", "Z")
        sizes = named_sizes(d)
        self.row_sizes = {k: tuple(sizes[s] for s in g["rows"]) for k, g in self.grids.items()}
        self.col_sizes = {k: tuple(sizes[s] for s in g["cols"]) for k, g in self.grids.items()}
        self.cells = {}
        slots = []
        for letter in self.order:
            parsed = []
            for i, row in enumerate(self.grids[letter]["cells"], start=1):
                line = []
                for j, text in enumerate(row, start=1):
                    if text == _name(letter, i, j):
                        line.append(_FREE)
                        slots.append(FreeSlot(text, self.row_sizes[letter][i - 1],
                                              self.col_sizes[letter][j - 1]))
                    else:
                        line.append(parse_cell(text))
                parsed.append(line)
            self.cells[letter] = parsed
        self.free_slots = tuple(slots)

    # parameters

    def zero_params(self) -> dict:
        return {s.name: QMatrix.zeros(s.rows, s.cols) for s in self.free_slots}

    def random_params(self, rng: random.Random, coeffs=(-2, -1, 0, 1, 2)) -> dict:
        return {s.name: random_matrix(rng, s.rows, s.cols, coeffs) for s in self.free_slots}

    def _check_params(self, params: Mapping) -> None:
        names = {s.name for s in self.free_slots}
        missing = names - set(params)
        unknown = set(params) - names
        if missing or unknown:
            raise ParameterError(f"missing slots {sorted(missing)}, unknown slots {sorted(unknown)}")
        for s in self.free_slots:
            if params[s.name].shape != (s.rows, s.cols):
                raise ParameterError(
                    f"slot {s.name} needs shape {s.rows}x{s.cols}, got {params[s.name].shape}")

    # assembly

    def hats(self, params: Mapping) -> dict:
        """The transformed unknowns X^, (W^,) Y^, Z^ for a parameter choice."""
        self._check_params(params)
        d = self.decomposition
        values = {}
        for letter in self.order:
            for i, line in enumerate(self.cells[letter], start=1):
                for j, cell in enumerate(line, start=1):
                    if cell is _FREE:
                        values[(letter, i, j)] = params[_name(letter, i, j)]
        for letter in self.order:
            rows, cols = self.row_sizes[letter], self.col_sizes[letter]
            for i, line in enumerate(self.cells[letter], start=1):
                for j, cell in enumerate(line, start=1):
                    if cell is _FREE:
                        continue
                    acc = QMatrix.zeros(rows[i - 1], cols[j - 1])
                    for sign, ref, a, b in cell:
                        # grids only ever refer to free cells of other unknowns
                        blk = d.block(a, b) if ref == "A" else values[(ref, a, b)]
                        acc = acc + blk if sign > 0 else acc - blk
                    values[(letter, i, j)] = acc
        out = {}
        for letter in self.order:
            nrows, ncols = len(self.row_sizes[letter]), len(self.col_sizes[letter])
            grid = [[values[(letter, i, j)] for j in range(1, ncols + 1)]
                    for i in range(1, nrows + 1)]
            out[letter] = block_matrix(grid, self.row_sizes[letter], self.col_sizes[letter])
        return out

    def assemble(self, params: Mapping) -> dict:
        d = self.decomposition
        h = self.hats(params)
        t1i, t2i, t3i = inverse(d.T1), inverse(d.T2), inverse(d.T3)
        v1i, v2i, v3i = inverse(d.V1), inverse(d.V2), inverse(d.V3)
        out = {}
        if self.equation == "three":
            out["X"] = mat_prod(t1i, h["X"], v1i)
        else:
            out["X"] = mat_prod(t1i, h["X"], d.Q)
            out["W"] = mat_prod(d.P, h["W"], v1i)
        out["Y"] = mat_prod(t2i, h["Y"], v2i)
        out["Z"] = mat_prod(t3i, h["Z"], v3i)
        return out

    def recover_params(self, solution: Mapping) -> dict:
        """Free parameters that reproduce a known solution."""
        d = self.decomposition
        hats = {
            "Y": mat_prod(d.T2, solution["Y"], d.V2),
            "Z": mat_prod(d.T3, solution["Z"], d.V3),
        }
        if self.equation == "three":
            hats["X"] = mat_prod(d.T1, solution["X"], d.V1)
        else:
            hats["X"] = mat_prod(d.T1, solution["X"], inverse(d.Q))
            hats["W"] = mat_prod(inverse(d.P), solution["W"], d.V1)
        params = {}
        for letter in self.order:
            grid = split(hats[letter], self.row_sizes[letter], self.col_sizes[letter])
            for i, line in enumerate(self.cells[letter], start=1):
                for j, cell in enumerate(line, start=1):
                    if cell is _FREE:
                        params[_name(letter, i, j)] = grid[i - 1][j - 1]
        return params

    def to_json(self) -> dict:
        refs = sorted({(a, b) for letter in self.order for line in self.cells[letter]
                       for cell in line if cell is not _FREE
                       for _, ref, a, b in cell if ref == "A"})
        return {
            "equation": self.equation,
            "free_slots": [{"name": s.name, "rows": s.rows, "cols": s.cols}
                           for s in self.free_slots],
            "grids": {k: {"row_sizes": list(self.row_sizes[k]),
                          "col_sizes": list(self.col_sizes[k]),
                          "cells": [list(r) for r in self.grids[k]["cells"]]}
                      for k in self.order},
            "blocks": {_name("A", a, b): matrix_to_json(self.decomposition.block(a, b))
                       for a, b in refs},
        }


def general_solution_three(d: SevenDecomposition) -> SolutionFamily:
    report = check_consistency_three(d)
    if not report.consistent:
        raise InconsistentSystem("B X E + C Y F + D Z G = A has no solution", report)
    return SolutionFamily(d, "three")


def general_solution_four(d: SevenDecomposition) -> SolutionFamily:
    report = check_consistency_four(d)
    if not report.consistent:
        raise InconsistentSystem("B X + W E + C Y F + D Z G = A has no solution", report)
    return SolutionFamily(d, "four")


def assemble_three(fam: SolutionFamily, params: Mapping) -> tuple:
    sol = fam.assemble(params)
    return sol["X"], sol["Y"], sol["Z"]


def assemble_four(fam: SolutionFamily, params: Mapping) -> tuple:
    sol = fam.assemble(params)
    return sol["X"], sol["W"], sol["Y"], sol["Z"]


def residual_three(inst, x: QMatrix, y: QMatrix, z: QMatrix) -> QMatrix:
    return inst.A - mat_prod(inst.B, x, inst.E) - mat_prod(inst.C, y, inst.F) \
        - mat_prod(inst.D, z, inst.G)


def residual_four(inst, x: QMatrix, w: QMatrix, y: QMatrix, z: QMatrix) -> QMatrix:
    return inst.A - inst.B @ x - w @ inst.E - mat_prod(inst.C, y, inst.F) \
        - mat_prod(inst.D, z, inst.G)


def residual(inst, equation: str, solution: Mapping) -> QMatrix:
    if equation == "three":
        return residual_three(inst, solution["X"], solution["Y"], solution["Z"])
    return residual_four(inst, solution["X"], solution["W"], solution["Y"], solution["Z"])

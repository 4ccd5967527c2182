"""The seven coefficient matrices, their JSON form and a seeded generator.

Shapes: A is m x n; B, C, D are m x p1, m x p2, m x p3; E, F, G are
q1 x n, q2 x n, q3 x n.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, fields
from typing import Sequence

from .errors import DimensionError, SchemaError
from .matrix import QMatrix, hstack, mat_prod, random_matrix
from .scalar import Quaternion

NAMES = ("A", "B", "C", "D", "E", "F", "G")
DEFAULT_COEFFS = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class Dims:
    m: int
    n: int
    p1: int
    p2: int
    p3: int
    q1: int
    q2: int
    q3: int

    @classmethod
    def parse(cls, text: str) -> "Dims":
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 8:
            raise ValueError("dims need eight comma separated values m,n,p1,p2,p3,q1,q2,q3")
        vals = [int(p) for p in parts]
        if min(vals) < 0:
            raise ValueError("dimensions must be non-negative")
        return cls(*vals)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))


@dataclass(frozen=True)
class Instance:
    A: QMatrix
    B: QMatrix
    C: QMatrix
    D: QMatrix
    E: QMatrix
    F: QMatrix
    G: QMatrix

    def __post_init__(self):
        check_shapes(self)

    @property
    def dims(self) -> Dims:
        return Dims(self.A.rows, self.A.cols, self.B.cols, self.C.cols, self.D.cols,
                    self.E.rows, self.F.rows, self.G.rows)

    def matrices(self) -> tuple:
        return (self.A, self.B, self.C, self.D, self.E, self.F, self.G)

    def replace(self, **changes) -> "Instance":
        vals = dict(zip(NAMES, self.matrices()))
        vals.update(changes)
        return Instance(**vals)

    def conj_transpose(self) -> "Instance":
        """Instance of the conjugate-transposed equation: A*, with E*,F*,G* on the left."""
        return Instance(self.A.H, self.E.H, self.F.H, self.G.H, self.B.H, self.C.H, self.D.H)


def check_shapes(inst) -> None:
    a = inst.A
    for name in ("B", "C", "D"):
        x = getattr(inst, name)
        if x.rows != a.rows:
            raise DimensionError(f"A.rows vs {name}.rows: {a.rows} != {x.rows}")
    for name in ("E", "F", "G"):
        x = getattr(inst, name)
        if x.cols != a.cols:
            raise DimensionError(f"A.cols vs {name}.cols: {a.cols} != {x.cols}")


# JSON -------------------------------------------------------------------


def matrix_to_json(a: QMatrix) -> dict:
    return {"rows": a.rows, "cols": a.cols,
            "entries": [[q.to_strings() for q in row] for row in a.to_rows()]}


def matrix_from_json(obj, location: str) -> QMatrix:
    if not isinstance(obj, dict):
        raise SchemaError("expected an object with rows, cols, entries", location)
    for key in ("rows", "cols", "entries"):
        if key not in obj:
            raise SchemaError(f"missing key {key!r}", location)
    rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    for key, val in (("rows", rows), ("cols", cols)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise SchemaError("must be a non-negative integer", f"{location}.{key}")
    if not isinstance(entries, list) or len(entries) != rows:
        raise SchemaError(f"expected {rows} rows", f"{location}.entries")
    flat = []
    for i, row in enumerate(entries):
        where = f"{location}.entries[{i}]"
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"expected {cols} entries", where)
        for j, q in enumerate(row):
            flat.append(Quaternion.from_strings(q, f"{where}[{j}]"))
    return QMatrix(rows, cols, flat)


def instance_to_json(inst: Instance) -> dict:
    return {name: matrix_to_json(m) for name, m in zip(NAMES, inst.matrices())}


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    missing = [n for n in NAMES if n not in obj]
    if missing:
        raise SchemaError(f"missing matrices {', '.join(missing)}")
    mats = {n: matrix_from_json(obj[n], n) for n in NAMES}
    try:
        return Instance(**mats)
    except DimensionError as exc:
        raise SchemaError(str(exc)) from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    return instance_from_json(obj)


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance_to_json(inst)))


# generation ---------------------------------------------------------------


def _structured(rng: random.Random, rows: int, cols: int, coeffs, basis=None) -> QMatrix:
    """A random matrix that is often rank deficient, zero, or shares columns with ``basis``."""
    roll = rng.random()
    if rows == 0 or cols == 0 or roll < 0.08:
        return QMatrix.zeros(rows, cols)
    if roll < 0.45:
        return random_matrix(rng, rows, cols, coeffs)
    r = rng.randint(1, max(1, min(rows, cols)))
    left = random_matrix(rng, rows, r, coeffs)
    if basis is not None and basis.cols and rng.random() < 0.6:
        # reuse directions of another matrix so column spaces intersect
        k = rng.randint(1, r)
        mix = mat_prod(basis, random_matrix(rng, basis.cols, k, coeffs))
        left = hstack(mix, left.submatrix(0, rows, 0, r - k))
    return left @ random_matrix(rng, r, cols, coeffs)


def random_coefficients(rng: random.Random, dims: Dims,
                        coeffs: Sequence[int] = DEFAULT_COEFFS) -> tuple:
    """B, C, D, E, F, G with a mix of generic and degenerate structure."""
    b = _structured(rng, dims.m, dims.p1, coeffs)
    c = _structured(rng, dims.m, dims.p2, coeffs, b)
    d = _structured(rng, dims.m, dims.p3, coeffs, hstack(b, c))
    eh = _structured(rng, dims.n, dims.q1, coeffs)
    fh = _structured(rng, dims.n, dims.q2, coeffs, eh)
    gh = _structured(rng, dims.n, dims.q3, coeffs, hstack(eh, fh))
    return b, c, d, eh.H, fh.H, gh.H


def generate(seed: int, dims: Dims, mode: str = "raw",
             coeffs: Sequence[int] = DEFAULT_COEFFS) -> tuple:
    """Deterministic instance for ``seed``; returns ``(instance, witness)``.

    ``mode`` is ``raw`` (A independent of the rest), ``consistent-three``
    (A = BXE + CYF + DZG) or ``consistent-four`` (A = BX + WE + CYF + DZG).
    ``witness`` maps unknown names to the matrices used, empty for ``raw``.
    """
    rng = random.Random(seed)
    b, c, d, e, f, g = random_coefficients(rng, dims, coeffs)
    m, n = dims.m, dims.n
    witness = {}
    if mode == "raw":
        a = random_matrix(rng, m, n, coeffs)
    elif mode == "consistent-three":
        x = random_matrix(rng, dims.p1, dims.q1, coeffs)
        y = random_matrix(rng, dims.p2, dims.q2, coeffs)
        z = random_matrix(rng, dims.p3, dims.q3, coeffs)
        a = mat_prod(b, x, e) + mat_prod(c, y, f) + mat_prod(d, z, g)
        witness = {"X": x, "Y": y, "Z": z}
    elif mode == "consistent-four":
        x = random_matrix(rng, dims.p1, n, coeffs)
        w = random_matrix(rng, m, dims.q1, coeffs)
        y = random_matrix(rng, dims.p2, dims.q2, coeffs)
        z = random_matrix(rng, dims.p3, dims.q3, coeffs)
        a = b @ x + w @ e + mat_prod(c, y, f) + mat_prod(d, z, g)
        witness = {"X": x, "W": w, "Y": y, "Z": z}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Instance(a, b, c, d, e, f, g), witness


def random_dims(rng: random.Random, low: int = 0, high: int = 6) -> Dims:
    return Dims(*(rng.randint(low, high) for _ in range(8)))

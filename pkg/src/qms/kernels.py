"""Backend selection for the integer kernels.

The compiled module is used when it was built and ``QMS_PURE_PYTHON`` is not
set to ``1``. Any call that overflows 128-bit arithmetic is transparently
rerun with the pure Python implementation.
"""
from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if os.environ.get("QMS_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


if _compiled is not None:
    _c_rank, _c_rref, _c_matmul = _compiled.rank, _compiled.rref, _compiled.matmul

    def rank(a: list, m: int, n: int) -> int:
        r = _c_rank(a, m, n)
        return r if r >= 0 else _pykernels.rank(a, m, n)

    def rref(a: list, m: int, n: int, npiv: int) -> tuple:
        out = _c_rref(a, m, n, npiv)
        return out if out is not None else _pykernels.rref(a, m, n, npiv)

    def matmul(a: list, b: list, m: int, k: int, n: int) -> list:
        out = _c_matmul(a, b, m, k, n)
        return out if out is not None else _pykernels.matmul(a, b, m, k, n)

else:
    rank = _pykernels.rank
    rref = _pykernels.rref
    matmul = _pykernels.matmul

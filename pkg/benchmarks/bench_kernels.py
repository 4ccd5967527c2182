"""Compare the compiled and pure Python integer kernels.

    python3 benchmarks/bench_kernels.py [--sizes 4,8,16,32] [--repeat 5]

Both backends get identical inputs; results are checked for equality
before timings are reported. The compiled column times the public wrappers
in ``qms.kernels``, so sizes whose intermediates outgrow 128 bits include
the automatic Python rerun; those rows are marked "fallback".
"""
from __future__ import annotations

import argparse
import random
import timeit

from qms import _pykernels, kernels
from qms.matrix import random_matrix

try:
    from qms import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _flat(a) -> list:
    return list(a.numerators)


def bench(size: int, repeat: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    a = random_matrix(rng, size, size)
    b = random_matrix(rng, size, size)
    fa, fb = _flat(a), _flat(b)
    cases = {
        "rank": lambda mod: mod.rank(list(fa), size, size),
        "matmul": lambda mod: mod.matmul(fa, fb, size, size, size),
    }
    out = {}
    for name, call in cases.items():
        row = {"python": min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=repeat))}
        if _ckernels is not None and kernels.BACKEND == "cython":
            if call(kernels) != call(_pykernels):
                raise SystemExit(f"{name} differs between backends at size {size}")
            raw = call(_ckernels)
            row["fallback"] = raw is None or raw == -1
            row["cython"] = min(timeit.repeat(lambda: call(kernels), number=1, repeat=repeat))
        out[name] = row
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,8,16,32")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'kernel':8} {'n':>4} {'python ms':>11} {'cython ms':>11} {'speedup':>8}")
    for size in (int(s) for s in args.sizes.split(",")):
        for name, row in bench(size, args.repeat).items():
            py = row["python"] * 1e3
            if "cython" in row:
                cy = row["cython"] * 1e3
                note = "  fallback" if row["fallback"] else ""
                print(f"{name:8} {size:4d} {py:11.3f} {cy:11.3f} {py / cy:7.1f}x{note}")
            else:
                print(f"{name:8} {size:4d} {py:11.3f} {'n/a':>11} {'':>8}")


if __name__ == "__main__":
    main()

"""Command line front end: ``qms gen|decompose|solve|rank-range|verify``.

Every command writes a JSON document (to ``--output`` or stdout). Exit
codes: 0 success, 1 input/schema problem, 2 inconsistent equation,
3 internal check failed.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile

from .errors import InconsistentSystem, InternalInconsistency, QMSError, SchemaError
from .instance import Dims, dumps, generate, instance_to_json, load_instance, matrix_to_json
from .rank_range import (
    UNKNOWNS, direct_report, internal_report, verify_block_rank_identities,
)
from .seven_decomp import decompose_instance, verify_decomposition
from .solvers import (
    SolutionFamily, check_consistency_four, check_consistency_three, residual,
)

EXIT_OK, EXIT_IO, EXIT_INCONSISTENT, EXIT_INTERNAL = 0, 1, 2, 3


def _default_seed() -> int:
    raw = os.environ.get("QMS_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"QMS_SEED must be an integer, got {raw!r}") from None


def _write(doc, path: str | None) -> None:
    text = dumps(doc)
    if not path:
        sys.stdout.write(text)
        return
    # write next to the target and rename so readers never see half a file
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".qms-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _checker(equation: str):
    return check_consistency_three if equation == "three" else check_consistency_four


# commands -----------------------------------------------------------------------


def cmd_gen(args) -> int:
    dims = Dims.parse(args.dims)
    inst, _ = generate(args.seed, dims, args.mode)
    _write(instance_to_json(inst), args.output)
    return EXIT_OK


def cmd_decompose(args) -> int:
    dec = decompose_instance(load_instance(args.input))
    doc = dec.to_json()
    doc["checks"] = verify_decomposition(dec).to_json()
    _write(doc, args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.input)
    dec = decompose_instance(inst)
    report = _checker(args.eq)(dec)
    if not report.consistent:
        _write({"consistency": report.to_json()}, args.output)
        return EXIT_INCONSISTENT
    fam = SolutionFamily(dec, args.eq)
    particular = fam.assemble(fam.zero_params())
    res = residual(inst, args.eq, particular)
    if not res.is_zero():
        raise InternalInconsistency("particular solution leaves a nonzero residual")
    doc = {
        "equation": args.eq,
        "consistency": report.to_json(),
        "solution": {k: matrix_to_json(v) for k, v in particular.items()},
        "residual": "0",
        "free_slots": [{"name": s.name, "rows": s.rows, "cols": s.cols} for s in fam.free_slots],
    }
    if args.sample:
        rng = random.Random(args.seed)
        samples = []
        for _ in range(args.sample):
            sol = fam.assemble(fam.random_params(rng))
            if not residual(inst, args.eq, sol).is_zero():
                raise InternalInconsistency("sampled solution leaves a nonzero residual")
            samples.append({"ranks": {k: v.rank() for k, v in sol.items()}, "residual": "0"})
        doc["samples"] = samples
    _write(doc, args.output)
    return EXIT_OK


def cmd_rank_range(args) -> int:
    inst = load_instance(args.input)
    dec = decompose_instance(inst)
    report = _checker(args.eq)(dec)
    if not report.consistent:
        _write({"consistency": report.to_json()}, args.output)
        return EXIT_INCONSISTENT
    names = [args.var] if args.var else list(UNKNOWNS[args.eq])
    out, agree = [], True
    for name in names:
        if name not in UNKNOWNS[args.eq]:
            raise SchemaError(f"{name} is not an unknown of the {args.eq}-term equation", "--var")
        direct = direct_report(inst, args.eq, name, dec, check=False)
        inner = internal_report(dec, args.eq, name, check=False)
        same = (direct.min, direct.max) == (inner.min, inner.max)
        agree &= same
        entry = direct.to_json()
        entry["internal"] = inner.to_json()
        entry["paths_agree"] = same
        out.append(entry)
    _write({"equation": args.eq, "reports": out}, args.output)
    return EXIT_OK if agree else EXIT_INTERNAL


def cmd_verify(args) -> int:
    inst = load_instance(args.input)
    dec = decompose_instance(inst)
    checks = verify_decomposition(dec)
    consistency = {eq: _checker(eq)(dec).to_json() for eq in ("three", "four")}
    identities = verify_block_rank_identities(dec)
    doc = {"decomposition": checks.to_json(), "consistency": consistency,
           "identities": identities.to_json()}
    _write(doc, args.output)
    return EXIT_OK if checks.passed and identities.passed else EXIT_INTERNAL


# argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="instance JSON file")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=None, help="random seed (default: $QMS_SEED or 0)")

    p = sub.add_parser("gen", help="generate a seeded instance")
    common(p, needs_input=False)
    p.add_argument("--dims", required=True, help="m,n,p1,p2,p3,q1,q2,q3")
    p.add_argument("--mode", default="raw", choices=("raw", "consistent-three", "consistent-four"))
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="simultaneous decomposition of the seven matrices")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("solve", help="particular solution and optional random samples")
    common(p)
    p.add_argument("--eq", default="three", choices=("three", "four"))
    p.add_argument("--sample", type=int, default=0, help="number of random solutions to draw")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("rank-range", help="min and max rank of the unknowns")
    common(p)
    p.add_argument("--eq", default="three", choices=("three", "four"))
    p.add_argument("--var", choices=("X", "Y", "Z", "W"))
    p.set_defaults(func=cmd_rank_range)

    p = sub.add_parser("verify", help="run every identity check on an instance")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except InconsistentSystem as exc:
        if exc.report is not None:
            _write({"consistency": exc.report.to_json()}, args.output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QMSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

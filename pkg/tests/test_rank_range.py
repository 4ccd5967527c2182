import random

import pytest

from oracle import seeded_instances, solution_ranks
from qms.errors import InconsistentSystem, PatternError
from qms.instance import Dims, Instance, generate
from qms.matrix import QMatrix, block_matrix, hstack, random_rank_matrix, vstack
from qms.rank_range import (
    IDENTITIES, UNKNOWNS, P, RankPattern, assemble, direct_report, internal_report, rank_range,
    rank_range_internal_path, rank_range_W_four, rank_range_X_four, rank_range_X_three,
    rank_range_Y_three, rank_range_YZ_four, rank_range_Z_three, verify_block_rank_identities,
)
from qms.seven_decomp import decompose_instance

Z = QMatrix.zeros
EYE = QMatrix.identity
COMBOS = [(eq, u) for eq in ("three", "four") for u in UNKNOWNS[eq]]


def _inst(seed=0) -> Instance:
    inst, _ = generate(seed, Dims(3, 4, 2, 1, 2, 2, 1, 2), "raw")
    return inst


# patterns


def test_pattern_parse_and_text():
    p = RankPattern.parse("d0ab0|da00c|0e000|00f00|0f000")
    assert p == P("d0ab0", "da00c", "0e000", "00f00", "0f000")
    assert p.text == "d0ab0|da00c|0e000|00f00|0f000"
    assert str(P("bcd")) == "r_{bcd}"
    for bad in ("ab|c", "xy", "", "a|"):
        with pytest.raises(PatternError):
            RankPattern.parse(bad)


def test_pattern_examples():
    inst = _inst()
    assert assemble(P("bcd"), inst) == hstack(inst.B, inst.C, inst.D)
    assert assemble(P("bcd"), inst).rank() == hstack(inst.B, inst.C, inst.D).rank()
    assert assemble(P("e", "f", "g"), inst) == vstack(inst.E, inst.F, inst.G)
    a, b, c, d, e, f, g = inst.matrices()
    dm = inst.dims
    expected = block_matrix(
        [[d, None, a, b, None], [d, a, None, None, c], [None, e, None, None, None],
         [None, None, f, None, None], [None, f, None, None, None]],
        [dm.m, dm.m, dm.q1, dm.q2, dm.q2], [dm.p3, dm.n, dm.n, dm.p1, dm.p2])
    assert assemble(RankPattern.parse("d0ab0|da00c|0e000|00f00|0f000"), inst) == expected


def test_pattern_size_errors():
    inst = _inst()
    with pytest.raises(PatternError):
        assemble(P("ae"), inst)  # a has m rows, e has q1 rows
    with pytest.raises(PatternError):
        assemble(P("a0", "e0"), inst)  # second column has no letter


# collapse cases with a unique solution


def _a(seed, m, n, r):
    return random_rank_matrix(random.Random(seed), m, n, r)


def test_z_three_collapses_when_z_is_forced():
    a = _a(1, 3, 3, 2)
    inst = Instance(a, Z(3, 2), Z(3, 2), EYE(3), Z(2, 3), Z(2, 3), EYE(3))
    rr = rank_range_Z_three(inst)
    assert rr.min == rr.max == 2


def test_x_three_collapses_when_x_is_forced():
    a = _a(2, 3, 3, 1)
    inst = Instance(a, EYE(3), Z(3, 2), Z(3, 1), EYE(3), Z(2, 3), Z(1, 3))
    rr = rank_range_X_three(inst)
    assert rr.min == rr.max == 1


def test_y_three_collapses_when_y_is_forced():
    a = _a(3, 3, 3, 3)
    inst = Instance(a, Z(3, 2), EYE(3), Z(3, 1), Z(2, 3), EYE(3), Z(1, 3))
    rr = rank_range_Y_three(inst)
    assert rr.min == rr.max == 3


def test_x_four_collapses_when_x_is_forced():
    a = _a(4, 3, 4, 2)
    inst = Instance(a, EYE(3), Z(3, 2), Z(3, 1), Z(2, 4), Z(1, 4), Z(1, 4))
    rr = rank_range_X_four(inst)
    assert rr.min == rr.max == 2


def test_w_four_collapses_when_w_is_forced():
    a = _a(5, 3, 3, 2)
    inst = Instance(a, Z(3, 2), Z(3, 2), Z(3, 1), EYE(3), Z(1, 3), Z(2, 3))
    rr = rank_range_W_four(inst)
    assert rr.min == rr.max == 2


def test_y_and_z_four_collapse():
    a = _a(6, 3, 3, 2)
    only_y = Instance(a, Z(3, 1), EYE(3), Z(3, 1), Z(1, 3), EYE(3), Z(1, 3))
    ry, _ = rank_range_YZ_four(only_y)
    assert ry.min == ry.max == 2
    only_z = Instance(a, Z(3, 1), Z(3, 1), EYE(3), Z(1, 3), Z(1, 3), EYE(3))
    _, rz = rank_range_YZ_four(only_z)
    assert rz.min == rz.max == 2


@pytest.mark.parametrize("eq,unknown", COMBOS)
def test_zero_right_hand_side_gives_zero_min(eq, unknown):
    inst, _ = generate(9, Dims(3, 3, 2, 2, 2, 2, 2, 2), "raw")
    inst = inst.replace(A=Z(3, 3))
    dec = decompose_instance(inst)
    assert direct_report(inst, eq, unknown, dec).min == 0
    assert internal_report(dec, eq, unknown).min == 0


def test_zero_system_both_paths():
    z = Z(2, 2)
    dec = decompose_instance(Instance(z, z, z, z, z, z, z))
    for eq, u in COMBOS:
        assert internal_report(dec, eq, u).min == 0
        assert direct_report(dec.inputs, eq, u, dec).min == 0
    assert rank_range_internal_path(dec, "W").min == 0


def test_inconsistent_input_is_refused():
    inst, _ = generate(2, Dims(4, 4, 1, 0, 0, 1, 0, 0), "raw")
    with pytest.raises(InconsistentSystem):
        rank_range_Z_three(inst)
    with pytest.raises(InconsistentSystem):
        rank_range_internal_path(decompose_instance(inst), "X", "four")


# two paths and sampling


@pytest.mark.parametrize("eq,unknown", COMBOS)
def test_direct_and_internal_paths_agree(eq, unknown):
    for seed, inst, _ in seeded_instances(15, f"consistent-{eq}", high=5):
        dec = decompose_instance(inst)
        direct = direct_report(inst, eq, unknown, dec)
        inner = internal_report(dec, eq, unknown)
        assert (direct.min, direct.max) == (inner.min, inner.max), seed
        assert rank_range(inst, eq, unknown, dec) == direct


@pytest.mark.parametrize("eq", ["three", "four"])
def test_sampled_solutions_stay_in_range(eq):
    hit = {u: 0 for u in UNKNOWNS[eq]}
    total = 0
    for seed, inst, _ in seeded_instances(12, f"consistent-{eq}", high=5, base=300):
        dec = decompose_instance(inst)
        ranges = {u: direct_report(inst, eq, u, dec).range for u in UNKNOWNS[eq]}
        samples = solution_ranks(dec, eq, 15, seed)
        total += 1
        for u in UNKNOWNS[eq]:
            assert all(s[u] in ranges[u] for s in samples), (seed, u)
            hit[u] += any(s[u] == ranges[u].max for s in samples)
    assert all(v == total for v in hit.values()), hit


# identities


def test_identity_table_size():
    assert sum(i.equation == "three" for i in IDENTITIES) == 12
    assert sum(i.equation == "four" for i in IDENTITIES) == 10


@pytest.mark.parametrize("eq", ["three", "four"])
def test_block_rank_identities(eq):
    for seed, inst, _ in seeded_instances(15, f"consistent-{eq}", high=5, base=50):
        report = verify_block_rank_identities(decompose_instance(inst), eq)
        assert report.passed, (seed, report.failures())


def test_identities_on_zero_system():
    z = Z(2, 3)
    inst = Instance(Z(2, 2), z, z, z, z.H, z.H, z.H)
    report = verify_block_rank_identities(decompose_instance(inst))
    assert report.passed and len(report.results) == len(IDENTITIES)
    assert all(lhs == 0 and rhs == 0 for _, lhs, rhs, _ in report.results)

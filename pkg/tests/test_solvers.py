import random

import pytest

from oracle import perturbed_instances, seeded_instances
from qms.errors import InconsistentSystem, ParameterError
from qms.instance import Dims, Instance, generate
from qms.matrix import QMatrix, split
from qms.seven_decomp import decompose_instance
from qms.solvers import (
    SolutionFamily, assemble_four, assemble_three, check_consistency_four, check_consistency_three,
    general_solution_four, general_solution_three, parse_cell, residual,
)

CHECK = {"three": check_consistency_three, "four": check_consistency_four}


def _zero(m=2, n=3) -> Instance:
    z = QMatrix.zeros
    return Instance(z(m, n), z(m, 2), z(m, 1), z(m, 2), z(1, n), z(2, n), z(2, n))


def test_parse_cell():
    assert parse_cell("A61-A41+X41") == [(1, "A", 6, 1), (-1, "A", 4, 1), (1, "X", 4, 1)]
    assert parse_cell("A1,10") == [(1, "A", 1, 10)]
    assert parse_cell("A10,4-A46") == [(1, "A", 10, 4), (-1, "A", 4, 6)]


@pytest.mark.parametrize("eq", ["three", "four"])
def test_zero_system(eq):
    dec = decompose_instance(_zero())
    fam = SolutionFamily(dec, eq)
    sol = fam.assemble(fam.zero_params())
    assert all(v.is_zero() for v in sol.values())
    # with every coefficient zero, the unknowns are completely free
    assert sum(s.rows * s.cols for s in fam.free_slots) == sum(v.rows * v.cols for v in sol.values())


@pytest.mark.parametrize("eq", ["three", "four"])
def test_consistent_instances_solve_exactly(eq):
    for seed, inst, _ in seeded_instances(30, f"consistent-{eq}", high=5):
        dec = decompose_instance(inst)
        assert CHECK[eq](dec).consistent, seed
        fam = SolutionFamily(dec, eq)
        assert residual(inst, eq, fam.assemble(fam.zero_params())).is_zero(), seed
        rng = random.Random(seed)
        for _ in range(5):
            assert residual(inst, eq, fam.assemble(fam.random_params(rng))).is_zero(), seed


@pytest.mark.parametrize("eq", ["three", "four"])
def test_witness_recovery(eq):
    for seed, inst, witness in seeded_instances(30, f"consistent-{eq}", high=5):
        fam = SolutionFamily(decompose_instance(inst), eq)
        assert fam.assemble(fam.recover_params(witness)) == witness, seed


def test_distinct_draws_give_distinct_solutions():
    inst, _ = generate(4, Dims(4, 4, 3, 3, 3, 3, 3, 3), "consistent-three")
    fam = general_solution_three(decompose_instance(inst))
    rng = random.Random(0)
    x1, y1, z1 = assemble_three(fam, fam.random_params(rng))
    x2, y2, z2 = assemble_three(fam, fam.random_params(rng))
    assert (x1, y1, z1) != (x2, y2, z2)
    for x, y, z in ((x1, y1, z1), (x2, y2, z2)):
        assert residual(inst, "three", {"X": x, "Y": y, "Z": z}).is_zero()
    fam4 = general_solution_four(decompose_instance(generate(4, inst.dims, "consistent-four")[0]))
    a = assemble_four(fam4, fam4.random_params(rng))
    b = assemble_four(fam4, fam4.random_params(rng))
    assert a != b


@pytest.mark.parametrize("eq", ["three", "four"])
def test_consistency_agrees_with_linear_oracle(eq):
    # perturbed instances: the report must match an independent solvability test
    seen_inconsistent = 0
    for seed, bad, truth in perturbed_instances(eq, 30):
        dec = decompose_instance(bad)
        report = CHECK[eq](dec)
        assert report.consistent == truth, seed
        if not report.consistent:
            seen_inconsistent += 1
            assert report.failed_conditions and all(name for name, _ in report.failed_conditions)
            with pytest.raises(InconsistentSystem) as info:
                (general_solution_three if eq == "three" else general_solution_four)(dec)
            assert info.value.report is not None
        else:
            fam = SolutionFamily(dec, eq)
            assert residual(bad, eq, fam.assemble(fam.zero_params())).is_zero()
    assert seen_inconsistent >= 20


def test_rank_condition_is_named():
    inst, _ = generate(2, Dims(4, 4, 1, 0, 0, 1, 0, 0), "raw")
    report = check_consistency_four(decompose_instance(inst))
    assert not report.consistent
    assert any(name.startswith("r[A B C D") for name, _ in report.failed_conditions)


def test_three_term_consistency_implies_four_term():
    for seed, inst, _ in seeded_instances(60, "raw", high=3):
        dec = decompose_instance(inst)
        if check_consistency_three(dec).consistent:
            assert check_consistency_four(dec).consistent, seed


def test_parameter_shapes_are_checked():
    inst, _ = generate(1, Dims(3, 3, 2, 2, 2, 2, 2, 2), "consistent-three")
    fam = SolutionFamily(decompose_instance(inst), "three")
    params = fam.zero_params()
    name = next(iter(params))
    with pytest.raises(ParameterError):
        fam.assemble({**params, name: QMatrix.zeros(9, 9)})
    with pytest.raises(ParameterError):
        fam.assemble({k: v for k, v in params.items() if k != name})


def _hat_block(fam, hats, letter, i, j):
    return split(hats[letter], fam.row_sizes[letter], fam.col_sizes[letter])[i - 1][j - 1]


def test_dependent_cells_follow_chosen_frees():
    inst, _ = generate(6, Dims(5, 5, 3, 3, 3, 3, 3, 3), "consistent-three")
    dec = decompose_instance(inst)
    fam = SolutionFamily(dec, "three")
    params = fam.random_params(random.Random(1))
    hats = fam.hats(params)
    expect = dec.block(6, 1) - dec.block(4, 1) + params["X41"]
    assert _hat_block(fam, hats, "Y", 1, 4) == expect

    inst4, _ = generate(6, Dims(5, 5, 3, 3, 3, 3, 3, 3), "consistent-four")
    dec4 = decompose_instance(inst4)
    fam4 = SolutionFamily(dec4, "four")
    params4 = fam4.random_params(random.Random(2))
    hats4 = fam4.hats(params4)
    expect4 = dec4.block(4, 1) - (params4["X41"] + params4["W41"])
    assert _hat_block(fam4, hats4, "Z", 2, 5) == expect4


def test_family_json():
    inst, _ = generate(1, Dims(3, 3, 2, 2, 2, 2, 2, 2), "consistent-four")
    doc = SolutionFamily(decompose_instance(inst), "four").to_json()
    assert doc["equation"] == "four" and set(doc["grids"]) == {"X", "W", "Y", "Z"}

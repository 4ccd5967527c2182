import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from oracle import quaternion_rank
from qms import _pykernels, kernels
from qms.errors import DimensionError, SingularError
from qms.matrix import (
    QMatrix, block_matrix, canonical_form, g_inverse, inverse, mat_mul, null_space, random_matrix,
    random_rank_matrix, rank_pattern, solve_right,
)
from qms.scalar import I, J, K, Quaternion

M = QMatrix.from_rows


def test_product_examples():
    a = random_matrix(random.Random(0), 3, 4)
    assert mat_mul(QMatrix.identity(3), a) == a
    assert M([[I]]) @ M([[J]]) == M([[K]])
    assert M([[J]]) @ M([[I]]) == M([[-K]])
    with pytest.raises(DimensionError):
        a @ a


def test_rank_examples():
    assert QMatrix.identity(4).rank() == 4
    assert QMatrix.zeros(3, 5).rank() == 0
    assert M([[1, I], [J, K]]).rank() == 2
    # right dependent: second column is the first times i
    assert M([[1, I], [J, J * I]]).rank() == 1


def test_inverse_examples():
    assert inverse(QMatrix.identity(3)) == QMatrix.identity(3)
    assert inverse(M([[I]])) == M([[-I]])
    a = M([[1, I], [0, J]])
    # worked by hand: the (1,2) entry is -i * j^-1 = -i * (-j) = k
    assert inverse(a) == M([[1, K], [0, -J]])
    assert a @ inverse(a) == QMatrix.identity(2) == inverse(a) @ a
    with pytest.raises(SingularError):
        inverse(M([[1, I], [J, J * I]]))


def test_rank_matches_real_representation():
    rng = random.Random(7)
    for _ in range(60):
        m, n = rng.randint(0, 5), rng.randint(0, 5)
        r = rng.randint(0, min(m, n)) if min(m, n) else 0
        a = random_rank_matrix(rng, m, n, r) if r else random_matrix(rng, m, n)
        assert a.rank() == quaternion_rank(a)


def test_canonical_form_round_trip():
    assert canonical_form(QMatrix.zeros(2, 3)).r == 0
    eye = canonical_form(QMatrix.identity(3))
    assert eye.r == 3 and eye.P @ eye.Q == QMatrix.identity(3)
    rng = random.Random(11)
    for _ in range(40):
        a = random_rank_matrix(rng, 3, 4, rng.randint(0, 3))
        cf = canonical_form(a)
        assert cf.r == a.rank()
        assert cf.P @ a @ cf.Q == rank_pattern(3, 4, cf.r)
        assert inverse(cf.P) @ rank_pattern(3, 4, cf.r) @ inverse(cf.Q) == a


def test_canonical_form_deterministic():
    a = random_matrix(random.Random(3), 4, 4)
    assert canonical_form(a) == canonical_form(a)


def test_g_inverse():
    assert g_inverse(QMatrix.identity(3)) == QMatrix.identity(3)
    assert g_inverse(QMatrix.zeros(2, 5)) == QMatrix.zeros(5, 2)
    rng = random.Random(2)
    for _ in range(30):
        a = random_rank_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), 1)
        assert a @ g_inverse(a) @ a == a


def test_conj_transpose():
    assert QMatrix.identity(3).H == QMatrix.identity(3)
    assert M([[I, J]]).H == M([[-I], [-J]])
    rng = random.Random(4)
    for _ in range(20):
        a, b = random_matrix(rng, 3, 2), random_matrix(rng, 2, 4)
        assert (a @ b).H == b.H @ a.H
        assert a.H.rank() == a.rank()


def test_null_space_and_solve():
    rng = random.Random(9)
    for _ in range(20):
        a = random_rank_matrix(rng, 4, 5, rng.randint(0, 4))
        ns = null_space(a)
        assert (a @ ns).is_zero() and ns.cols == 5 - a.rank()
        x = random_matrix(rng, 5, 2)
        sol = solve_right(a, a @ x)
        assert sol is not None and a @ sol == a @ x


def test_rational_entries_and_value_semantics():
    a = M([[Fraction(1, 3), Quaternion(0, Fraction(-2, 5))]])
    b = M([[Fraction(2, 6), Quaternion(0, Fraction(-4, 10))]])
    assert a == b and hash(a) == hash(b)
    with pytest.raises(AttributeError):
        a.rows = 3


def test_block_matrix_shapes():
    a = QMatrix.identity(2)
    big = block_matrix([[a, None], [None, a]], [2, 2], [2, 2])
    assert big == QMatrix.identity(4)
    with pytest.raises(DimensionError):
        block_matrix([[a, None]], [3], [2, 1])


def _flat(a: QMatrix) -> list:
    return list(a.numerators)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
def test_backends_agree():
    from qms import _ckernels

    rng = random.Random(21)
    for _ in range(40):
        m, k, n = rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6)
        a, b = random_matrix(rng, m, k), random_matrix(rng, k, n)
        assert _ckernels.rank(_flat(a), m, k) == _pykernels.rank(_flat(a), m, k)
        assert _ckernels.matmul(_flat(a), _flat(b), m, k, n) == _pykernels.matmul(
            _flat(a), _flat(b), m, k, n)
    # large enough that 128-bit elimination overflows and the wrapper reruns in Python
    a = random_matrix(rng, 16, 16)
    assert _ckernels.rank(_flat(a), 16, 16) == -1
    assert kernels.rank(_flat(a), 16, 16) == _pykernels.rank(_flat(a), 16, 16) == 16


def test_overflow_falls_back_to_python():
    big = 10 ** 40
    a = M([[Quaternion(big, 1, 0, 0), Quaternion(big + 1)], [Quaternion(3), Quaternion(big, 0, 2)]])
    assert a.rank() == quaternion_rank(a)
    assert (a @ a) == M([[sum((a.to_rows()[i][t] * a.to_rows()[t][j] for t in range(2)), Quaternion(0))
                          for j in range(2)] for i in range(2)])


def test_backend_switch_by_environment():
    env = dict(os.environ, QMS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import qms; print(qms.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True).stdout.strip()
    assert out == "python"

import random
from fractions import Fraction

import pytest

from qms.errors import DivisionByZero, SchemaError
from qms.scalar import I, J, K, ONE, ZERO, Quaternion, norm2, parse_rational, q_conj, q_inv, q_mul


def rand_q(rng, lo=-5, hi=5):
    return Quaternion(*(Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(4)))


def test_hamilton_table():
    minus_one = Quaternion(-1)
    assert I * I == J * J == K * K == I * J * K == minus_one
    assert I * J == K and J * K == I and K * I == J
    assert J * I == -K and K * J == -I and I * K == -J


def test_product_examples():
    assert q_mul(I, J) == K
    q = Quaternion(3, -1, 2, 5)
    assert q_mul(ONE, q) == q == q_mul(q, ONE)
    assert q_mul(I + J, I - J) == Quaternion(0, 0, 0, -2)


def test_inverse_examples():
    assert q_inv(I) == -I
    assert q_inv(Quaternion(2)) == Quaternion(Fraction(1, 2))
    assert q_inv(Quaternion(1, 1, 1, 1)) == Quaternion(1, -1, -1, -1) * Fraction(1, 4)
    with pytest.raises(DivisionByZero):
        q_inv(ZERO)


def test_conjugate_examples():
    assert q_conj(K) == -K
    assert q_conj(Quaternion(3)) == Quaternion(3)
    assert q_conj(Quaternion(1, 2)) == Quaternion(1, -2)


def test_norm():
    assert norm2(Quaternion(1, 2, 3, 4)) == 30
    assert norm2(ZERO) == 0


def test_randomized_algebra():
    rng = random.Random(1234)
    for _ in range(2000):
        x, y, z = rand_q(rng), rand_q(rng), rand_q(rng)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z
        assert norm2(x * y) == norm2(x) * norm2(y)
        assert q_conj(x * y) == q_conj(y) * q_conj(x)
        if not x.is_zero():
            assert x * q_inv(x) == ONE == q_inv(x) * x
            assert q_inv(q_inv(x)) == x


def test_noncommutative():
    rng = random.Random(5)
    seen = False
    for _ in range(50):
        x, y = rand_q(rng), rand_q(rng)
        seen |= x * y != y * x
    assert seen


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(" 7 ") == 7
    for bad in ("0.5", "x", ""):
        with pytest.raises(SchemaError):
            parse_rational(bad)
    with pytest.raises(DivisionByZero, match=r"A\[0\]"):
        parse_rational("1/0", "A[0]")


def test_string_round_trip():
    q = Quaternion(Fraction(-1, 3), 0, 5, Fraction(7, 2))
    assert Quaternion.from_strings(q.to_strings()) == q

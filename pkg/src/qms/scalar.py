"""Exact rationals and quaternions with rational coefficients.

``Rational`` is :class:`fractions.Fraction`; it already keeps numerator and
denominator reduced with a positive denominator after every operation.
A :class:`Quaternion` stores four of them as the coefficients of 1, i, j, k.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral, Rational as _RationalABC

from .errors import DivisionByZero, SchemaError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently bring rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (Integral, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text: str, location: str = "") -> Fraction:
    """Parse ``"p"`` or ``"p/q"``. A zero denominator raises DivisionByZero."""
    if not isinstance(text, str):
        raise SchemaError(f"expected a rational string, got {type(text).__name__}", location)
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise SchemaError(f"malformed rational {text!r}", location)
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        where = f" at {location}" if location else ""
        raise DivisionByZero(f"zero denominator in {text!r}{where}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Quaternion:
    """a0 + a1 i + a2 j + a3 k with rational coefficients; immutable."""

    __slots__ = ("_c",)

    def __init__(self, a0=0, a1=0, a2=0, a3=0):
        object.__setattr__(
            self, "_c", (to_rational(a0), to_rational(a1), to_rational(a2), to_rational(a3))
        )

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        """Accept a Quaternion, a real scalar, or a 4-sequence of coefficients."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (tuple, list)):
            if len(value) != 4:
                raise ValueError("a quaternion needs exactly four coefficients")
            return cls(*value)
        return cls(value)

    @classmethod
    def from_strings(cls, parts, location: str = "") -> "Quaternion":
        if not isinstance(parts, (list, tuple)) or len(parts) != 4:
            raise SchemaError("a quaternion is a list of four rational strings", location)
        return cls(*(parse_rational(p, f"{location}[{k}]") for k, p in enumerate(parts)))

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    @property
    def coeffs(self) -> tuple:
        return self._c

    a0 = property(lambda self: self._c[0])
    a1 = property(lambda self: self._c[1])
    a2 = property(lambda self: self._c[2])
    a3 = property(lambda self: self._c[3])

    def to_strings(self) -> list:
        return [format_rational(c) for c in self._c]

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_real(self) -> bool:
        return not any(self._c[1:])

    def norm2(self) -> Fraction:
        a, b, c, d = self._c
        return a * a + b * b + c * c + d * d

    def conj(self) -> "Quaternion":
        a, b, c, d = self._c
        return Quaternion(a, -b, -c, -d)

    def inverse(self) -> "Quaternion":
        n = self.norm2()
        if n == 0:
            raise DivisionByZero("the zero quaternion has no inverse")
        a, b, c, d = self._c
        return Quaternion(a / n, -b / n, -c / n, -d / n)

    def __mul__(self, other):
        try:
            other = Quaternion.coerce(other)
        except TypeError:
            return NotImplemented
        a1, b1, c1, d1 = self._c
        a2, b2, c2, d2 = other._c
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        try:
            other = Quaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return other.__mul__(self)

    def __add__(self, other):
        try:
            other = Quaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return Quaternion(*(x + y for x, y in zip(self._c, other._c)))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Quaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return Quaternion(*(x - y for x, y in zip(self._c, other._c)))

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __neg__(self):
        return Quaternion(*(-x for x in self._c))

    def __truediv__(self, other):
        # x / y means x * y^{-1}; spelled out because the order matters
        return self * Quaternion.coerce(other).inverse()

    def __eq__(self, other):
        try:
            other = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return "Quaternion(" + ", ".join(format_rational(c) for c in self._c) + ")"

    def __str__(self):
        terms = []
        for coeff, unit in zip(self._c, ("", "i", "j", "k")):
            if coeff == 0:
                continue
            mag = format_rational(abs(coeff))
            if unit and mag == "1":
                mag = ""
            sign = "-" if coeff < 0 else "+"
            terms.append((sign, mag + unit))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


ZERO = Quaternion(0)
ONE = Quaternion(1)
I = Quaternion(0, 1)
J = Quaternion(0, 0, 1)
K = Quaternion(0, 0, 0, 1)


def q_mul(x: Quaternion, y: Quaternion) -> Quaternion:
    """Hamilton product x*y."""
    return Quaternion.coerce(x) * Quaternion.coerce(y)


def q_inv(x: Quaternion) -> Quaternion:
    return Quaternion.coerce(x).inverse()


def q_conj(x: Quaternion) -> Quaternion:
    return Quaternion.coerce(x).conj()


def norm2(x: Quaternion) -> Fraction:
    return Quaternion.coerce(x).norm2()

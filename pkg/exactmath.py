"""
Exact scalars: rationals, the sign*sqrt(rational) domain of structure constants,
and the few rational linear-algebra routines the constructions need.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import sympy

from errors import ExactnessError

Rational = Union[int, Fraction]


def frac_str(value: Rational) -> str:
    """Render a rational as "p/q" (always with a denominator)"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal literal into a Fraction"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational number: {text!r}") from e


def rational_sqrt(value: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None when irrational"""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class Surd:
    """A real number sign * sqrt(sq) with sq a non-negative rational.

    Products stay in the domain; sums only when the radicands differ by a
    rational square, otherwise ExactnessError is raised.
    """

    sign: int
    sq: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 0, 1) or self.sq < 0:
            raise ValueError(f"invalid surd ({self.sign}, {self.sq})")
        if (self.sign == 0) != (self.sq == 0):
            raise ValueError("zero surd must have sign 0 and sq 0")

    @classmethod
    def zero(cls) -> "Surd":
        return cls(0, Fraction(0))

    @classmethod
    def rational(cls, value: Rational) -> "Surd":
        value = Fraction(value)
        return cls(_sign(value), value * value)

    @classmethod
    def root(cls, sign: int, sq: Rational) -> "Surd":
        sq = Fraction(sq)
        return cls(sign if sq else 0, sq)

    def is_zero(self) -> bool:
        return self.sign == 0

    def __bool__(self) -> bool:
        return self.sign != 0

    def __neg__(self) -> "Surd":
        return Surd(-self.sign, self.sq)

    def __mul__(self, other) -> "Surd":
        if not isinstance(other, Surd):
            other = Surd.rational(other)
        return Surd(self.sign * other.sign, self.sq * other.sq)

    __rmul__ = __mul__

    def __add__(self, other) -> "Surd":
        if not isinstance(other, Surd):
            other = Surd.rational(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        ratio = rational_sqrt(self.sq / other.sq)
        if ratio is None:
            raise ExactnessError(f"cannot add {self} and {other} exactly")
        # self + other = sqrt(other.sq) * (self.sign * ratio + other.sign)
        factor = self.sign * ratio + other.sign
        return Surd(_sign(factor), factor * factor * other.sq)

    __radd__ = __add__

    def __sub__(self, other) -> "Surd":
        if not isinstance(other, Surd):
            other = Surd.rational(other)
        return self + (-other)

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.sq)

    def to_rational(self) -> Fraction:
        root = rational_sqrt(self.sq)
        if root is None:
            raise ExactnessError(f"{self} is irrational")
        return self.sign * root

    def to_json(self) -> dict:
        return {"sign": self.sign, "nsq": frac_str(self.sq)}

    def __str__(self) -> str:
        root = rational_sqrt(self.sq)
        if root is not None:
            return str(self.sign * root)
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}sqrt({self.sq})"


def _to_sympy(rows: Sequence[Sequence[Rational]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row]
                         for row in rows])


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def solve_rational(matrix: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> Optional[List[Fraction]]:
    """Solve matrix @ x = rhs exactly; None when inconsistent.

    The system may be overdetermined; a unique solution is required.
    """
    a = _to_sympy(matrix)
    b = _to_sympy([[x] for x in rhs])
    try:
        solution, params = a.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0] != 0:
        raise ValueError("system is underdetermined")
    return [_from_sympy(x) for x in solution]


def is_positive_definite(matrix: Sequence[Sequence[Rational]]) -> bool:
    return bool(_to_sympy(matrix).is_positive_definite)

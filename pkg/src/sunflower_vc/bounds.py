"""Scalar bound functions: the smoothed iterated logarithm and friends.

All values are exact.  ``log_star_smoothed`` takes half-integer values: each
interval between consecutive towers of 2s is split where the top 2 of the
lower tower becomes a 3, giving t+1 on the lower piece and t+3/2 on the upper
one.  Arguments are reduced through the identity
``log*(2**y) = log*(y) + 1`` using integer bit lengths, so towers are never
materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import PreconditionError


@dataclass(frozen=True, eq=False)
class HalfInteger:
    """A non-negative multiple of 1/2, stored as twice its value."""

    twice_value: int

    def __post_init__(self):
        if self.twice_value < 0:
            raise ValueError("HalfInteger must be non-negative")

    @classmethod
    def of(cls, value) -> HalfInteger:
        f = Fraction(value) * 2
        if f.denominator != 1:
            raise ValueError(f"{value} is not a multiple of 1/2")
        return cls(int(f))

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def __add__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self.twice_value + other.twice_value)
        if isinstance(other, int):
            return HalfInteger(self.twice_value + 2 * other)
        if isinstance(other, Rational):
            return HalfInteger.of(self.as_fraction() + other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self.twice_value - other.twice_value)
        if isinstance(other, int):
            return HalfInteger(self.twice_value - 2 * other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, HalfInteger):
            return self.twice_value == other.twice_value
        if isinstance(other, (int, Rational, float)):
            return self.as_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        return self.as_fraction() < _frac(other)

    def __le__(self, other):
        return self.as_fraction() <= _frac(other)

    def __gt__(self, other):
        return self.as_fraction() > _frac(other)

    def __ge__(self, other):
        return self.as_fraction() >= _frac(other)

    def __hash__(self):
        return hash(self.as_fraction())

    def __float__(self):
        return self.twice_value / 2

    def __str__(self):
        if self.twice_value % 2 == 0:
            return str(self.twice_value // 2)
        return f"{self.twice_value // 2}.5"

    def __repr__(self):
        return f"HalfInteger({self})"


def _frac(x) -> Fraction:
    if isinstance(x, HalfInteger):
        return x.as_fraction()
    return Fraction(x)


# values on 1..4; the first split point below 4 is log2(3), which is not an integer
_SMALL_LOG_STAR = {1: 1, 2: 3, 3: 4, 4: 5}


def log_star_smoothed(x: int) -> HalfInteger:
    """Smoothed iterated binary logarithm of a positive integer."""
    if not isinstance(x, int) or isinstance(x, bool):
        raise TypeError("log_star_smoothed takes an integer")
    if x < 1:
        raise PreconditionError("log* is defined for x >= 1")
    shifts = 0
    while x > 4:
        # for integers y: y > 2**k  <=>  (y - 1).bit_length() > k, and every
        # interval endpoint above 4 is a power of two with integer exponent
        x = (x - 1).bit_length()
        shifts += 1
    return HalfInteger(_SMALL_LOG_STAR[x] + 2 * shifts)


def log_star_of_power_of_two(y: int) -> HalfInteger:
    """log*(2**y) without building 2**y."""
    return log_star_smoothed(y) + 1


def lambda_d(d: int, ell: int) -> HalfInteger:
    base = log_star_smoothed(ell)
    if ell > 2 ** (3 * d):
        return base + 2
    if ell > 9 * d * d:
        return base + 1
    return base


def ell_zero(d: int, epsilon) -> Fraction:
    eps = Fraction(epsilon)
    if not (0 < eps <= Fraction(1, 2)):
        raise PreconditionError("epsilon must lie in (0, 1/2]")
    return 300 * (Fraction(d) / eps) ** 3


def er_bound(r: int, ell: int) -> int:
    """(r-1)**ell * ell!, the classical bound on sunflower-free families."""
    if r < 1 or ell < 0:
        raise PreconditionError("need r >= 1 and ell >= 0")
    return (r - 1) ** ell * math.factorial(ell)


def vc1_threshold(r: int, ell: int) -> int:
    """(r-1)**ell, the sharp size threshold for VC-dimension-1 families."""
    if r < 1 or ell < 0:
        raise PreconditionError("need r >= 1 and ell >= 0")
    return (r - 1) ** ell

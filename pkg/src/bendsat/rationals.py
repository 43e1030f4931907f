"""Exact rational arithmetic, extended with the two infinities.

``Rational`` is ``fractions.Fraction``: arbitrary precision, always in lowest
terms with a positive denominator, and every operation is exact.

``ExtendedRational`` adds NEG_INF and POS_INF as first-class values with a
total order.  Arithmetic on infinities is only defined where the result is
unambiguous (inf + finite, sign * inf, ...); anything else raises, so that an
accidental "inf - inf" in bound reasoning fails loudly instead of producing a
wrong constant.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce ints and 'p/q' strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class ExtendedRational:
    """A rational number, or one of the symbols -inf / +inf.

    Instances are immutable and hashable.  ``sign`` is -1 for NEG_INF, +1 for
    POS_INF, and 0 for finite values (stored in ``value``).
    """

    __slots__ = ("sign", "value")

    def __init__(self, sign: int, value: Fraction = Fraction(0)) -> None:
        if sign not in (-1, 0, 1):
            raise ValueError(f"bad sign {sign!r}")
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "value", value if sign == 0 else Fraction(0))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ExtendedRational is immutable")

    @staticmethod
    def of(value: Union["ExtendedRational", RationalLike]) -> "ExtendedRational":
        if isinstance(value, ExtendedRational):
            return value
        if isinstance(value, str):
            text = value.strip()
            if text in ("inf", "+inf", "oo", "+oo"):
                return POS_INF
            if text in ("-inf", "-oo"):
                return NEG_INF
        return ExtendedRational(0, rat(value))

    @property
    def is_finite(self) -> bool:
        return self.sign == 0

    @property
    def is_pos_inf(self) -> bool:
        return self.sign > 0

    @property
    def is_neg_inf(self) -> bool:
        return self.sign < 0

    def finite(self) -> Fraction:
        """The finite value; raises on infinities."""
        if self.sign != 0:
            raise ValueError(f"{self} is not finite")
        return self.value

    def _key(self) -> tuple:
        return (self.sign, self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Fraction, int)):
            other = ExtendedRational.of(other)
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: "ExtendedRational") -> bool:
        other = ExtendedRational.of(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign != 0:
            return False
        return self.value < other.value

    def __le__(self, other: "ExtendedRational") -> bool:
        other = ExtendedRational.of(other)
        return self < other or self == other

    def __gt__(self, other: "ExtendedRational") -> bool:
        return ExtendedRational.of(other) < self

    def __ge__(self, other: "ExtendedRational") -> bool:
        return ExtendedRational.of(other) <= self

    def __neg__(self) -> "ExtendedRational":
        if self.sign != 0:
            return ExtendedRational(-self.sign)
        return ExtendedRational(0, -self.value)

    def __add__(self, other: Union["ExtendedRational", RationalLike]) -> "ExtendedRational":
        other = ExtendedRational.of(other)
        if self.sign == 0 and other.sign == 0:
            return ExtendedRational(0, self.value + other.value)
        if self.sign != 0 and other.sign != 0 and self.sign != other.sign:
            raise ArithmeticError("inf + -inf is undefined")
        return ExtendedRational(self.sign if self.sign != 0 else other.sign)

    def __sub__(self, other: Union["ExtendedRational", RationalLike]) -> "ExtendedRational":
        return self + (-ExtendedRational.of(other))

    def __mul__(self, other: RationalLike) -> "ExtendedRational":
        # Scaling by a nonzero finite rational only; 0 * inf is undefined.
        factor = rat(other)
        if self.sign != 0:
            if factor == 0:
                raise ArithmeticError("0 * inf is undefined")
            return ExtendedRational(self.sign if factor > 0 else -self.sign)
        return ExtendedRational(0, self.value * factor)

    def __truediv__(self, other: RationalLike) -> "ExtendedRational":
        factor = rat(other)
        if factor == 0:
            raise ZeroDivisionError("division by zero")
        return self * (Fraction(1) / factor)

    def __str__(self) -> str:
        if self.sign > 0:
            return "inf"
        if self.sign < 0:
            return "-inf"
        return str(self.value)

    def __repr__(self) -> str:
        return f"ExtendedRational({self})"


NEG_INF = ExtendedRational(-1)
POS_INF = ExtendedRational(1)
ZERO = ExtendedRational(0, Fraction(0))


def ext(value: Union[ExtendedRational, RationalLike]) -> ExtendedRational:
    """Shorthand for ExtendedRational.of."""
    return ExtendedRational.of(value)

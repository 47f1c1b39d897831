from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

ScalarLike = Union["TropScalar", int, Fraction, str]


@total_ordering
class TropScalar:
    """An element of the min-plus semiring: an exact rational or infinity.

    ``x + y`` is the tropical sum (minimum) and ``x * y`` the tropical product
    (ordinary addition). ``x ** q`` is the tropical power, ``q * x``.
    Infinity is the greatest element, absorbing for ``*`` and neutral for ``+``.
    """

    __slots__ = ("_value",)

    def __init__(self, value: Fraction | None):
        # None encodes infinity; Fraction keeps lowest terms with positive denominator
        object.__setattr__(self, "_value", value)

    def __setattr__(self, name, value):
        raise AttributeError("TropScalar is immutable")

    @classmethod
    def of(cls, value: ScalarLike) -> TropScalar:
        if isinstance(value, TropScalar):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not tropical scalars")
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("inf", "∞", "+inf", "infinity"):
                return INFINITY
            return cls(Fraction(text))
        raise TypeError(
            f"cannot build an exact tropical scalar from {type(value).__name__}"
        )

    @property
    def value(self) -> Fraction:
        if self._value is None:
            raise ValueError("infinity has no rational value")
        return self._value

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    def __add__(self, other: ScalarLike) -> TropScalar:
        return trop_add(self, TropScalar.of(other))

    __radd__ = __add__

    def __mul__(self, other: ScalarLike) -> TropScalar:
        return trop_mul(self, TropScalar.of(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int | Fraction) -> TropScalar:
        exponent = Fraction(exponent)
        if self._value is None:
            if exponent <= 0:
                raise ValueError("infinity has no non-positive tropical powers")
            return INFINITY
        return TropScalar(self._value * exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropScalar):
            try:
                other = TropScalar.of(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._value == other._value

    def __lt__(self, other) -> bool:
        other = TropScalar.of(other)
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __hash__(self) -> int:
        return hash(("TropScalar", self._value))

    def __str__(self) -> str:
        if self._value is None:
            return "inf"
        return str(self._value)

    def __repr__(self) -> str:
        return f"TropScalar({self})"

    def __reduce__(self):
        return (TropScalar, (self._value,))


INFINITY = TropScalar(None)
ZERO = TropScalar(Fraction(0))


def trop_add(x: TropScalar, y: TropScalar) -> TropScalar:
    """Tropical sum: the minimum, with infinity as the greatest element."""
    if x._value is None:
        return y
    if y._value is None:
        return x
    return x if x._value <= y._value else y


def trop_mul(x: TropScalar, y: TropScalar) -> TropScalar:
    """Tropical product: rational addition, infinity absorbing."""
    if x._value is None or y._value is None:
        return INFINITY
    return TropScalar(x._value + y._value)

"""Exact coefficient arithmetic over the rationals and over prime fields F_p.

A :class:`FieldSpec` names the field (characteristic 0 rationals, or F_p for a
prime p); a :class:`FieldElement` is a value tagged with its spec.  Rational
values are stdlib ``Fraction`` instances, which are always in lowest terms
with a positive denominator, so the canonical form is maintained for free.
Prime-field values are ints in ``[0, p)``.

No floating point is used anywhere: Groebner intermediates blow up and only
exact results are acceptable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import FieldMismatchError


def _is_prime(n: int) -> bool:
    # Deterministic trial division; the moduli used here are small.
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldSpec:
    """The rationals (``p is None``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not isinstance(p, int) or not _is_prime(p):
                raise ValueError(f"modulus {p!r} is not a prime")
        self.p = p

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    def element(self, value: Union[int, Fraction, "FieldElement"]) -> "FieldElement":
        """Coerce an int, Fraction, or element of this field."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatchError(f"{value} is not an element of {self}")
            return value
        if isinstance(value, Fraction):
            if self.p is None:
                return FieldElement(self, value)
            return self.from_ratio(value.numerator, value.denominator)
        if isinstance(value, int):
            if self.p is None:
                return FieldElement(self, Fraction(value))
            return FieldElement(self, value % self.p)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_ratio(self, numerator: int, denominator: int) -> "FieldElement":
        """The canonical element numerator/denominator.

        Raises ZeroDivisionError when the denominator vanishes (in F_p: is
        divisible by p).
        """
        if self.p is None:
            return FieldElement(self, Fraction(numerator, denominator))
        d = denominator % self.p
        if d == 0:
            raise ZeroDivisionError(f"denominator {denominator} vanishes in {self}")
        return FieldElement(self, numerator * pow(d, -1, self.p) % self.p)

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self):
        return hash(("FieldSpec", self.p))

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    __repr__ = __str__


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def normalize_rational(numerator: int, denominator: int) -> "FieldElement":
    """Lowest-terms rational with positive denominator; d = 0 raises."""
    return QQ.from_ratio(numerator, denominator)


class FieldElement:
    """An exact field value tagged with its :class:`FieldSpec`.

    Instances are immutable; arithmetic between elements of different fields
    raises :class:`FieldMismatchError`.  Ints (and Fractions over QQ) coerce
    on the fly, so ``coeff * 3`` works.
    """

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value):
        self.spec = spec
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(
                    f"mixed-field operands: {self.spec} vs {other.spec}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.spec.element(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.spec.p is None:
            return FieldElement(self.spec, self.value + o.value)
        return FieldElement(self.spec, (self.value + o.value) % self.spec.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.spec.p is None:
            return FieldElement(self.spec, self.value - o.value)
        return FieldElement(self.spec, (self.value - o.value) % self.spec.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.spec.p is None:
            return FieldElement(self.spec, self.value * o.value)
        return FieldElement(self.spec, (self.value * o.value) % self.spec.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        if self.spec.p is None:
            return FieldElement(self.spec, -self.value)
        return FieldElement(self.spec, (-self.value) % self.spec.p)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError(f"division by zero in {self.spec}")
        if self.spec.p is None:
            return FieldElement(self.spec, 1 / self.value)
        return FieldElement(self.spec, pow(self.value, -1, self.spec.p))

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    @property
    def numerator(self) -> int:
        return self.value.numerator if self.spec.p is None else self.value

    @property
    def denominator(self) -> int:
        return self.value.denominator if self.spec.p is None else 1

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self == self.spec.element(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"{self.spec}:{self.value}"

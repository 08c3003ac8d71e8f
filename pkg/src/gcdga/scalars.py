"""Exact arithmetic over the Gaussian rationals Q(i)."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

from gmpy2 import mpq

ScalarLike = Union["GaussianRational", int, Fraction, str, tuple, list]


_F0 = mpq(0)


class GaussianRational:
    """An exact scalar ``re + im*i`` with ``re, im`` rational.

    Instances are immutable and hashable. Components are ``gmpy2.mpq``,
    always in lowest terms; they compare and hash like ``Fraction``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", mpq(re))
        object.__setattr__(self, "im", mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value: ScalarLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        if isinstance(value, complex):
            raise TypeError("floating point complex numbers are not exact")
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, (tuple, list)):
            if len(value) == 4:
                return cls.from_wire(value)
            if len(value) == 2:
                return cls(mpq(value[0]), mpq(value[1]))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"a"``, ``"a/b"``, ``"i"``, ``"-1/4i"``, ``"1/2+3i"`` and the like."""
        s = text.replace(" ", "").replace("*", "")
        if not s:
            raise ValueError("empty scalar")
        if not s.endswith("i"):
            return cls(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not the leading one
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0:
            re_part, im_part = body[:cut], body[cut:]
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Fraction(re_part), Fraction(im_part))

    @classmethod
    def from_wire(cls, entry) -> "GaussianRational":
        re_num, re_den, im_num, im_den = (int(x) for x in entry)
        if re_den == 0 or im_den == 0:
            raise ValueError("zero denominator in scalar")
        return cls(mpq(re_num, re_den), mpq(im_num, im_den))

    def to_wire(self) -> list[int]:
        return [int(self.re.numerator), int(self.re.denominator), int(self.im.numerator), int(self.im.denominator)]

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        if not other.re and not other.im:
            return self
        if not self.re and not self.im:
            return other
        return _new(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return _new(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not a:
                return self
            return _new(a * c, a * d if d else _F0)
        if not d:
            if not c:
                return other
            return _new(a * c if a else _F0, b * c)
        return _new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __neg__(self):
        return _new(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        im = _imag_str(abs(self.im))
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{im}"


def _imag_str(x: mpq) -> str:
    if x == 1:
        return "i"
    if x == -1:
        return "-i"
    return f"{x}i"


def _lift(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)):
        return GaussianRational(value)
    return NotImplemented


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gq(value: ScalarLike = 0, im=None) -> GaussianRational:
    """Shorthand constructor: ``gq(1, 2)``, ``gq("1/4")``, ``gq("-i")``."""
    if im is not None:
        return GaussianRational(value, im)
    return GaussianRational.coerce(value)


def _new(re: mpq, im: mpq) -> GaussianRational:
    # components are already mpq; skip the coercing constructor
    obj = object.__new__(GaussianRational)
    object.__setattr__(obj, "re", re)
    object.__setattr__(obj, "im", im)
    return obj

"""Coefficient fields: exact Gaussian rationals and double-precision complex."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

_MPQ = type(mpq(0))


def _q(x) -> mpq:
    if type(x) is _MPQ:
        return x
    if isinstance(x, (int, Rational)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussQ:
    """Gaussian rational ``re + im*i`` with arbitrary-precision parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _raw(cls, re, im) -> GaussQ:
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    @classmethod
    def coerce(cls, x) -> GaussQ:
        if type(x) is cls:
            return x
        if isinstance(x, (float, complex)):
            raise TypeError("float to exact conversion is not allowed")
        return cls._raw(_q(x), _ZERO)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if type(other) is not GaussQ:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            if isinstance(other, (int, Rational)):
                return GaussQ._raw(self.re + other, self.im)
            return NotImplemented
        return GaussQ._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussQ:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            if isinstance(other, (int, Rational)):
                return GaussQ._raw(self.re - other, self.im)
            return NotImplemented
        return GaussQ._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, (float, complex)):
            return other - complex(self)
        if isinstance(other, (int, Rational)):
            return GaussQ._raw(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return GaussQ._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is not GaussQ:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            if isinstance(other, (int, Rational)):
                return GaussQ._raw(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            return GaussQ._raw(a * c, a * d)
        if not d:
            return GaussQ._raw(a * c, b * c)
        return GaussQ._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if type(other) is not GaussQ:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            if isinstance(other, (int, Rational)):
                if not other:
                    raise ZeroDivisionError("GaussQ division by zero")
                return GaussQ._raw(self.re / other, self.im / other)
            return NotImplemented
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("GaussQ division by zero")
            return GaussQ._raw(self.re / c, self.im / c)
        den = c * c + d * d
        a, b = self.re, self.im
        return GaussQ._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        if isinstance(other, (int, Rational)):
            return GaussQ._raw(_q(other), _ZERO) / self
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (1 / self) ** (-k)
        out = GaussQ._raw(_ONE, _ZERO)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> GaussQ:
        return GaussQ._raw(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is GaussQ:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self):
        return f"GaussQ({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


_ZERO = mpq(0)
_ONE = mpq(1)
I = GaussQ(0, 1)


def to_field(x, mode: str):
    """Convert a raw number (int, Fraction, GaussQ, str) into the mode's field."""
    if mode == EXACT:
        return GaussQ.coerce(x)
    if mode == FLOAT:
        if isinstance(x, str):
            x = Fraction(x)
        return complex(x)
    raise ValueError(f"unknown mode {mode!r}")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an int, or a Fraction into a Fraction (floats rejected)."""
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Rational):
        return Fraction(text.numerator, text.denominator)
    if isinstance(text, str):
        s = text.strip()
        if any(ch in s for ch in ".eE") and "/" not in s:
            raise ValueError(f"non-rational coefficient {text!r}")
        return Fraction(s)
    raise TypeError(f"non-rational coefficient {text!r}")


def fmt_rational(x) -> str:
    """Lossless ``p/q`` string for a rational (integers print without ``/1``)."""
    x = Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, Fraction) else x
    return str(x)


def magnitude(x) -> float:
    return abs(complex(x))

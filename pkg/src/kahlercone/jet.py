"""Order-2 truncated Taylor jets in up to two formal directions.

A jet represents ``f(t0 + a*d1 + b*d2)`` truncated after total degree 2::

    c0 + c1*a + c2*b + c11*a**2 + c12*a*b + c22*b**2

The coefficients are Taylor coefficients, so ``f_aa = 2*c11`` while the mixed
derivative is ``f_ab = c12``. Coefficients may be any field element
(``GaussQ`` or ``complex``); derivatives of rational functions are exact over
``GaussQ``.
"""

from __future__ import annotations

from fractions import Fraction

_FIELDS = ("c0", "c1", "c2", "c11", "c12", "c22")


class Jet2:
    __slots__ = _FIELDS

    def __init__(self, c0, c1=0, c2=0, c11=0, c12=0, c22=0):
        self.c0 = c0
        self.c1 = c1
        self.c2 = c2
        self.c11 = c11
        self.c12 = c12
        self.c22 = c22

    @classmethod
    def variable(cls, value, d1=0, d2=0) -> Jet2:
        """Seed ``value + d1*a + d2*b``."""
        return cls(value, d1, d2, 0, 0, 0)

    def coeffs(self) -> tuple:
        return (self.c0, self.c1, self.c2, self.c11, self.c12, self.c22)

    # derivative accessors ---------------------------------------------------
    @property
    def value(self):
        return self.c0

    def d(self, slot: int):
        """First derivative along direction ``slot`` (1 or 2)."""
        return self.c1 if slot == 1 else self.c2

    def dd(self, s1: int, s2: int):
        """Second derivative along directions ``s1`` and ``s2``."""
        if s1 != s2:
            return self.c12
        c = self.c11 if s1 == 1 else self.c22
        return c + c

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        if type(o) is Jet2:
            return Jet2(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2,
                        self.c11 + o.c11, self.c12 + o.c12, self.c22 + o.c22)
        return Jet2(self.c0 + o, self.c1, self.c2, self.c11, self.c12, self.c22)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.c0, -self.c1, -self.c2, -self.c11, -self.c12, -self.c22)

    def __sub__(self, o):
        if type(o) is Jet2:
            return Jet2(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2,
                        self.c11 - o.c11, self.c12 - o.c12, self.c22 - o.c22)
        return Jet2(self.c0 - o, self.c1, self.c2, self.c11, self.c12, self.c22)

    def __rsub__(self, o):
        return Jet2(o - self.c0, -self.c1, -self.c2, -self.c11, -self.c12, -self.c22)

    def __mul__(self, o):
        if type(o) is not Jet2:
            if not o:
                return Jet2(o * self.c0, 0, 0, 0, 0, 0)
            return Jet2(self.c0 * o, self.c1 * o, self.c2 * o,
                        self.c11 * o, self.c12 * o, self.c22 * o)
        x0, x1, x2, x11, x12, x22 = self.c0, self.c1, self.c2, self.c11, self.c12, self.c22
        y0, y1, y2, y11, y12, y22 = o.c0, o.c1, o.c2, o.c11, o.c12, o.c22
        return Jet2(
            x0 * y0,
            x0 * y1 + x1 * y0,
            x0 * y2 + x2 * y0,
            x0 * y11 + x1 * y1 + x11 * y0,
            x0 * y12 + x1 * y2 + x2 * y1 + x12 * y0,
            x0 * y22 + x2 * y2 + x22 * y0,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> Jet2:
        y0 = self.c0
        if not y0:
            raise ZeroDivisionError("jet with zero value part is not invertible")
        r = Fraction(1, y0) if type(y0) is int else 1 / y0
        p = self.c1 * r
        q = self.c2 * r
        return Jet2(
            r,
            -p * r,
            -q * r,
            (p * p - self.c11 * r) * r,
            (2 * p * q - self.c12 * r) * r,
            (q * q - self.c22 * r) * r,
        )

    def __truediv__(self, o):
        if type(o) is Jet2:
            return self * o.reciprocal()
        # keep exact zeros exact: int 0 / int would turn into a float
        return Jet2(*(_div(c, o) for c in self.coeffs()))

    def __rtruediv__(self, o):
        return self.reciprocal() * o

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = Jet2(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> Jet2:
        # directions are real, so conjugation commutes with differentiation
        return Jet2(*(c.conjugate() if hasattr(c, "conjugate") else c for c in self.coeffs()))

    def __bool__(self):
        return any(bool(c) for c in self.coeffs())

    def __eq__(self, o):
        if type(o) is Jet2:
            return all(a == b for a, b in zip(self.coeffs(), o.coeffs()))
        return self.c0 == o and not (self.c1 or self.c2 or self.c11 or self.c12 or self.c22)

    def __hash__(self):
        return hash(self.coeffs())

    def __abs__(self) -> float:
        return max(abs(c) for c in self.coeffs())

    def __repr__(self):
        return "Jet2(" + ", ".join(f"{n}={c}" for n, c in zip(_FIELDS, self.coeffs())) + ")"


def _div(c, o):
    if not c:
        return c
    if type(c) is int and type(o) is int:
        return Fraction(c, o)
    return c / o


def value_part(x):
    return x.c0 if type(x) is Jet2 else x


def jet_part(x, which: str):
    """Extract one Taylor coefficient (``'c1'``, ``'c12'``...) of a jet or constant."""
    if type(x) is Jet2:
        return getattr(x, which)
    return x if which == "c0" else 0

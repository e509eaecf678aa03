"""Exact Gaussian rationals ``a + b*i`` with ``a, b`` in Q."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = ["Scalar", "ZERO", "ONE", "I", "as_scalar", "parse_scalar"]

Number = Union["Scalar", Fraction, int]


class Scalar:
    """An element of Q(i).

    Both parts are stored as :class:`fractions.Fraction`, so they are always
    reduced with positive denominators. Instances are immutable and hashable.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Union[Fraction, int, str] = 0, im: Union[Fraction, int, str] = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.re, self.im))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            return Scalar._make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return Scalar._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self.re, -self.im)

    def __sub__(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            return Scalar._make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return Scalar._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other: Number) -> "Scalar":
        return (-self) + other

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return Scalar._make(a * c, b)
            return Scalar._make(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Scalar._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._make(self.re / norm, -self.im / norm)

    def __truediv__(self, other: Number) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._make(self.re / other, self.im / other)
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: Number) -> "Scalar":
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # comparison -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    # formatting -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        """Render as ``a/b+c/d*i``; this is also the serialization format."""
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


ZERO = Scalar._make(Fraction(0), Fraction(0))
ONE = Scalar._make(Fraction(1), Fraction(0))
I = Scalar._make(Fraction(0), Fraction(1))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar._make(Fraction(x), Fraction(0))
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


_RAT = r"[+-]?\d+(?:/\d+)?"
_SERIAL = re.compile(rf"^(?:(?P<re>{_RAT})(?=[+-]|$))?(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\*?i)?$")


def parse_scalar(text: str) -> Scalar:
    """Parse the serialized form produced by ``str(Scalar)``.

    Accepts ``3``, ``-1/2``, ``i``, ``-i``, ``2/3*i``, ``1/2-3*i``. The
    structure-file grammar (with parentheses) lives in :mod:`hermharm.model`.
    """
    s = text.replace(" ", "")
    m = _SERIAL.match(s)
    if not s or m is None or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt is None:
        im_part = Fraction(0)
    elif im_txt in ("", "+"):
        im_part = Fraction(1)
    elif im_txt == "-":
        im_part = Fraction(-1)
    else:
        im_part = Fraction(im_txt)
    return Scalar._make(re_part, im_part)

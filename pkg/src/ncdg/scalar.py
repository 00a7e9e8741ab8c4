"""Exact Gaussian rationals, the base field of every computation in ncdg.

A value is stored as ``(a + b*i) / d`` with integers ``a, b`` and ``d > 0``,
reduced so that ``gcd(a, b, d) == 1``.  Integer-valued scalars (``d == 1``)
take a fast path in every operation since they dominate in practice.

Text form (used by the JSON spec files)::

    7   -3/2   1/2+3/4*i   -5*i   2-1/3*i

The ``/1`` denominator is omitted and the imaginary part always carries an
explicit ``*i`` suffix.  ``parse(format(x)) == x`` for every scalar and
``format(parse(s)) == s`` for every string in canonical form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

from .errors import ParseError

__all__ = ["Scalar", "ZERO", "ONE", "I", "parse_scalar", "format_scalar", "as_scalar"]


class Scalar:
    __slots__ = ("a", "b", "d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self.a, self.b, self.d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "Scalar":
        if d != 1:
            g = gcd(a, b, d)
            if g != 1:
                a //= g
                b //= g
                d //= g
        obj = object.__new__(cls)
        obj.a = a
        obj.b = b
        obj.d = d
        return obj

    # -- accessors ---------------------------------------------------------
    @property
    def real(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.b, self.d)

    def conjugate(self) -> "Scalar":
        if not self.b:
            return self
        return Scalar._raw(self.a, -self.b, self.d)

    def is_real(self) -> bool:
        return self.b == 0

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, _COERCIBLE):
                return NotImplemented
            other = as_scalar(other)
        if self.d == other.d:
            d = self.d
            if d == 1:
                return Scalar._raw(self.a + other.a, self.b + other.b, 1)
            return Scalar._raw(self.a + other.a, self.b + other.b, d)
        return Scalar._raw(
            self.a * other.d + other.a * self.d,
            self.b * other.d + other.b * self.d,
            self.d * other.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, _COERCIBLE):
                return NotImplemented
            other = as_scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, _COERCIBLE):
                return NotImplemented
            other = as_scalar(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if not b1 and not b2:
            return Scalar._raw(a1 * a2, 0, self.d * other.d)
        return Scalar._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self.d * other.d)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        # d / (a + b i) = d (a - b i) / (a^2 + b^2)
        a, b = self.d * self.a, -self.d * self.b
        if n < 0:
            a, b, n = -a, -b, -n
        return Scalar._raw(a, b, n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, _COERCIBLE):
                return NotImplemented
            other = as_scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison --------------------------------------------------------
    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self == as_scalar(other)
        if isinstance(other, complex):
            return self.d == 1 and complex(self.a, self.b) == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar._raw(0, 0, 1)
ONE = Scalar._raw(1, 0, 1)
I = Scalar._raw(0, 1, 1)


_COERCIBLE = (int, Fraction, complex, str)


def as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Scalar._raw(value, 0, 1)
    if isinstance(value, Fraction):
        return Scalar._raw(value.numerator, 0, value.denominator)
    if isinstance(value, complex):
        if value.real != int(value.real) or value.imag != int(value.imag):
            raise TypeError("only integral complex literals convert exactly")
        return Scalar._raw(int(value.real), int(value.imag), 1)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Scalar")


_RAT = r"[0-9]+(?:/[0-9]+)?"
_SCALAR_RE = re.compile(
    rf"^(?:(?P<re>[+-]?{_RAT})(?P<im>[+-](?:{_RAT}\*)?i)?|(?P<pim>[+-]?(?:{_RAT}\*)?i))$"
)


def _parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def _parse_imag(text: str) -> Fraction:
    body = text[:-1]  # drop the trailing "i"
    sign = -1 if body.startswith("-") else 1
    body = body.lstrip("+-")
    if not body:
        return Fraction(sign)
    return sign * _parse_rational(body.rstrip("*"))


def parse_scalar(text: str, where: str | None = None) -> Scalar:
    """Parse ``a/b``, ``a/b+c/d*i`` or ``c/d*i`` (``/1`` may be omitted)."""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return as_scalar(text)
        raise ParseError(f"scalar must be a string, got {text!r}", where)
    m = _SCALAR_RE.match(text.replace(" ", ""))
    if m is None:
        raise ParseError(f"malformed scalar {text!r}", where)
    try:
        if m.group("pim") is not None:
            return Scalar(0, _parse_imag(m.group("pim")))
        re_part = _parse_rational(m.group("re"))
        im_part = _parse_imag(m.group("im")) if m.group("im") else Fraction(0)
    except ParseError as exc:
        raise ParseError(str(exc), where) from None
    return Scalar(re_part, im_part)


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    re_part, im_part = x.real, x.imag
    if not im_part:
        return _fmt_rational(re_part)
    im_txt = _fmt_rational(abs(im_part)) + "*i"
    if not re_part:
        return ("-" if im_part < 0 else "") + im_txt
    return _fmt_rational(re_part) + ("-" if im_part < 0 else "+") + im_txt

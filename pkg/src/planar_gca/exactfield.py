"""Exact arithmetic in the Gaussian rationals Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["Scalar", "ScalarParseError", "parse_scalar", "as_scalar", "ZERO", "ONE", "I"]


class ScalarParseError(ValueError):
    def __init__(self, text: str, column: int, message: str) -> None:
        self.text = text
        self.column = column
        super().__init__(f"{message} at column {column}: {text!r}")


class Scalar:
    """An element a + b*i with a, b rational.

    Values are immutable and hashable. ``re`` and ``im`` are reduced
    arbitrary-precision rationals (gmpy2 ``mpq``, positive denominators), so
    equality is structural.
    """

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0) -> None:
        self.re = re if type(re) is _MPQ else _to_mpq(re)
        self.im = im if type(im) is _MPQ else _to_mpq(im)
        self._hash = None

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{_imag_str(abs(self.im))}"

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.re) if not self.im else hash((self.re, self.im))
            self._hash = h
        return h

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational, _MPQ)):
            return not self.im and self.re == other
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def as_fractions(self) -> tuple[Fraction, Fraction]:
        return (
            Fraction(int(self.re.numerator), int(self.re.denominator)),
            Fraction(int(self.im.numerator), int(self.im.denominator)),
        )

    @property
    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> Scalar:
        return Scalar(self.re, -self.im)

    def norm(self):
        """|z|^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def __neg__(self) -> Scalar:
        return Scalar(-self.re, -self.im)

    def __pos__(self) -> Scalar:
        return self

    def __add__(self, other) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> Scalar:
        if type(other) is int:
            return Scalar(self.re * other, self.im * other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar(a * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        if not self:
            raise ZeroDivisionError("inverse of zero Scalar")
        if not self.im:
            return Scalar(1 / self.re)
        n = self.norm()
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n: int) -> Scalar:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        if not self.im:
            return Scalar(self.re**n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


_MPQ = type(mpq(0))


def _to_mpq(x):
    if isinstance(x, Rational) and not isinstance(x, (int, Fraction)):
        x = Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass int, Fraction or str")
    return mpq(x)


def _imag_str(im) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}*i"


def _coerce(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Rational, _MPQ)) and not isinstance(x, bool):
        return Scalar(x)
    return None


def as_scalar(x) -> Scalar:
    """Coerce an int, Fraction, Scalar or scalar text into a Scalar."""
    if isinstance(x, str):
        return parse_scalar(x)
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot interpret {x!r} as a Scalar")
    return s


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)

_TERM = re.compile(
    r"""
    (?P<sign>[+-])?
    (?:
        (?P<num>\d+)(?:/(?P<den>\d+))?(?P<imag>\*?i)?
      | (?P<bare>i)
    )
    """,
    re.VERBOSE,
)


def parse_scalar(text: str) -> Scalar:
    """Parse ``a``, ``a/b``, ``a/b+c/d*i``, ``c/d*i``, ``3i`` or ``i``.

    Whitespace is ignored. At most one real and one imaginary part are allowed.
    """
    compact = "".join(text.split())
    if not compact:
        raise ScalarParseError(text, 1, "empty scalar")
    pos = 0
    re_part = None
    im_part = None
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if m is None or m.end() == pos or (pos > 0 and not m.group("sign")):
            raise ScalarParseError(text, _column(text, pos), "unexpected character")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("bare"):
            value, imaginary = mpq(sign), True
        else:
            den = int(m.group("den") or 1)
            if den == 0:
                raise ScalarParseError(text, _column(text, pos), "zero denominator")
            value = mpq(sign * int(m.group("num")), den)
            imaginary = bool(m.group("imag"))
        if imaginary:
            if im_part is not None:
                raise ScalarParseError(text, _column(text, pos), "duplicate imaginary part")
            im_part = value
        else:
            if re_part is not None:
                raise ScalarParseError(text, _column(text, pos), "duplicate real part")
            re_part = value
        pos = m.end()
    return Scalar(0 if re_part is None else re_part, 0 if im_part is None else im_part)


def _column(text: str, compact_pos: int) -> int:
    # map an index in the whitespace-stripped string back to a 1-based column
    seen = 0
    for col, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        if seen == compact_pos:
            return col
        seen += 1
    return len(text) + 1

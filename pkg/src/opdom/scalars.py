"""Exact Gaussian-rational scalars.

Every scalar that enters a symbolic expression or an exact matrix is a
Scalar: a pair of Fractions (re, im) representing re + im*i.  Floats are
admitted as an escape hatch for numeric-only work and are converted
exactly (Fraction(float) is exact), so "exact mode" stays exact end to
end.
"""

from __future__ import annotations

from fractions import Fraction


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot build an exact scalar component from {type(x).__name__}")


class Scalar:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _to_fraction(re))
        object.__setattr__(self, "im", _to_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors ------------------------------------------------

    @staticmethod
    def of(value) -> "Scalar":
        """Coerce an int, Fraction, float, complex or Scalar."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            return Scalar(Fraction(value.real), Fraction(value.imag))
        return Scalar(_to_fraction(value))

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) + (-self)

    def __mul__(self, other):
        other = Scalar.of(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.of(other) * self.inverse()

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    # -- predicates / conversions ------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    # sort key used for canonical term ordering; exact, no floats
    def key(self):
        return (self.re, self.im)

    # -- text --------------------------------------------------------

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imtxt = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{imtxt}"

    def __repr__(self):
        return f"Scalar({self.re!r}, {self.im!r})"


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


def parse_scalar(text: str) -> Scalar:
    """Parse the scalar literal syntax used by the DSL and the CLI.

    Accepted forms: "2", "-2", "5/2", "-5/2", "i", "-i", "3i", "5/2i",
    and sums like "1+2i" / "1-2i".
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")

    def parse_simple(part: str) -> Scalar:
        if part in ("i", "+i"):
            return I_UNIT
        if part == "-i":
            return -I_UNIT
        if part.endswith("i"):
            return Scalar(0, Fraction(part[:-1]))
        return Scalar(Fraction(part))

    # split a trailing +/- that is not the leading sign and not inside "p/q"
    for k in range(len(s) - 1, 0, -1):
        if s[k] in "+-" and s[k - 1] not in "+-/":
            head, tail = s[:k], s[k:]
            if tail in ("+", "-"):
                break
            a, b = parse_simple(head), parse_simple(tail)
            if a.is_real() == b.is_real():
                break  # "1+2" or "i+i": not a canonical literal
            return a + b
    return parse_simple(s)


def format_scalar(s: Scalar) -> str:
    return str(s)

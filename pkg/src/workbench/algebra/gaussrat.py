"""Exact Gaussian rationals: numbers a + b*i with a, b in Q.

This is the coefficient field for every exact computation in the workbench.
Values are immutable and kept in canonical (fully reduced) form by virtue of
`fractions.Fraction` doing the reduction for each part.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rationalish = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class GaussRat:
    """An exact Gaussian rational re + im*i.

    Supports +, -, *, /, integer powers (negative powers invert), equality
    and hashing.  Mixed arithmetic with int and Fraction coerces exactly.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    # immutability
    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def i() -> "GaussRat":
        return GaussRat(0, 1)

    @staticmethod
    def coerce(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        raise TypeError(f"cannot coerce {x!r} to GaussRat")

    # -- predicates --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_rational(self) -> bool:
        return not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _try_coerce(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        return None

    def __add__(self, other):
        other = GaussRat._try_coerce(other)
        if other is None:
            return NotImplemented
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        other = GaussRat._try_coerce(other)
        if other is None:
            return NotImplemented
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = GaussRat._try_coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GaussRat._try_coerce(other)
        if other is None:
            return NotImplemented
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm2(self) -> Fraction:
        """The rational |z|^2 = re^2 + im^2."""
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = GaussRat.coerce(other)
        n2 = other.norm2()
        if not n2:
            raise ZeroDivisionError("division by zero GaussRat")
        num = self * other.conjugate()
        return GaussRat(num.re / n2, num.im / n2)

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("GaussRat powers must be integers")
        if k < 0:
            return (GaussRat(1) / self) ** (-k)
        result = GaussRat(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussRat(other)
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- conversions -------------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"

    # exact string pair used by the polynomial file format
    def to_strings(self) -> tuple[str, str]:
        return str(self.re), str(self.im)

    @staticmethod
    def from_strings(re: str, im: str = "0") -> "GaussRat":
        return GaussRat(Fraction(re), Fraction(im))


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)

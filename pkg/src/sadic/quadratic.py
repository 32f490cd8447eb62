"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

A Quad value is a + b*sqrt(D) with rational a, b and a fixed squarefree
D > 1.  Comparisons are decided exactly by sign analysis, never through
floating point, so these values can index interval endpoints and orbit
points without rounding drift.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


class Quad:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 5):
        if d <= 1 or _is_square(d):
            raise ValueError(f"need a non-square d > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    # -- helpers --------------------------------------------------------

    def _coerce(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.d != self.d:
                raise ValueError(f"mixed fields sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return Quad(other, 0, self.d)
        raise TypeError(f"cannot mix Quad with {type(other).__name__}")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError("not a rational value")
        return self.a

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return Quad(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return Quad(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        norm = o.a * o.a - o.b * o.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        inv = Quad(o.a / norm, -o.b / norm, self.d)
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- exact order ----------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        # opposite signs: compare a^2 with d b^2
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if self.a > 0:  # b < 0
            return 1 if lhs > rhs else -1 if lhs < rhs else 0
        return 1 if rhs > lhs else -1 if rhs < lhs else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, Quad):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __repr__(self) -> str:
        if self.b == 0:
            return f"Quad({self.a})"
        return f"Quad({self.a} + {self.b}*sqrt({self.d}))"

    def floor(self) -> int:
        """Exact floor, using float only as a first guess."""
        n = int(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def mod1(self) -> "Quad":
        return self - self.floor()


def sqrt5() -> Quad:
    return Quad(0, 1, 5)

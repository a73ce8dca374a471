"""Exact arithmetic in real quadratic fields Q(sqrt k).

Every constant and every threshold in the certification procedures lives in
Q(sqrt 2) or Q(sqrt 85).  Elements are stored as ``a + b*sqrt(k)`` with
rational ``a, b`` and squarefree ``k``; ordering is decided by integer
comparisons, so no floating point ever enters a verdict.
"""

from __future__ import annotations

import math
from functools import total_ordering
from numbers import Rational
from typing import Union

from gmpy2 import mpq

Number = Union[int, Rational, "QuadSurd"]


def _sign_of(a: mpq, b: mpq, k: int) -> int:
    """Sign of ``a + b*sqrt(k)``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 k
    lhs = a * a
    rhs = b * b * k
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


@total_ordering
class QuadSurd:
    """An element ``a + b*sqrt(k)`` of a real quadratic field."""

    __slots__ = ("a", "b", "k")

    def __init__(self, a: Number = 0, b: Number = 0, k: int = 2) -> None:
        if k < 2 or math.isqrt(k) ** 2 == k:
            raise ValueError(f"k={k} must be a non-square integer >= 2")
        self.a = mpq(a)
        self.b = mpq(b)
        self.k = int(k)

    # -- coercion -----------------------------------------------------
    def _coerce(self, other: Number) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.k != self.k and other.b != 0 and self.b != 0:
                raise ValueError(f"cannot mix Q(sqrt {self.k}) and Q(sqrt {other.k})")
            if other.k != self.k:
                if other.b == 0:
                    return QuadSurd(other.a, 0, self.k)
                return other  # self is rational; caller handles via _pair
            return other
        return QuadSurd(mpq(other), 0, self.k)

    def _pair(self, other: Number) -> tuple["QuadSurd", "QuadSurd"]:
        o = self._coerce(other)
        if o.k != self.k:
            # self rational, other irrational in a different field
            return QuadSurd(self.a, 0, o.k), o
        return self, o

    @classmethod
    def sqrt_of(cls, k: int) -> "QuadSurd":
        return cls(0, 1, k)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: Number) -> "QuadSurd":
        s, o = self._pair(other)
        return QuadSurd(s.a + o.a, s.b + o.b, s.k)

    __radd__ = __add__

    def __neg__(self) -> "QuadSurd":
        return QuadSurd(-self.a, -self.b, self.k)

    def __sub__(self, other: Number) -> "QuadSurd":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Number) -> "QuadSurd":
        return (-self) + other

    def __mul__(self, other: Number) -> "QuadSurd":
        s, o = self._pair(other)
        return QuadSurd(s.a * o.a + s.b * o.b * s.k, s.a * o.b + s.b * o.a, s.k)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.k)

    def norm(self) -> mpq:
        return self.a * self.a - self.b * self.b * self.k

    def inverse(self) -> "QuadSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadSurd(self.a / n, -self.b / n, self.k)

    def __truediv__(self, other: Number) -> "QuadSurd":
        s, o = self._pair(other)
        return s * o.inverse()

    def __rtruediv__(self, other: Number) -> "QuadSurd":
        return self.inverse() * other

    def __pow__(self, n: int) -> "QuadSurd":
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadSurd(1, 0, self.k)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- ordering -----------------------------------------------------
    def sign(self) -> int:
        return _sign_of(self.a, self.b, self.k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (int, Rational, QuadSurd)):
            return NotImplemented
        return (self - other).sign() == 0

    def __lt__(self, other: Number) -> bool:
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.k))

    # -- integer parts ------------------------------------------------
    def floor(self) -> int:
        """Largest integer n with n <= self."""
        approx = math.floor(float(self))
        n = approx - 2
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def ceil(self) -> int:
        return -((-self).floor())

    def floor_sqrt(self) -> int:
        """Largest integer n >= 0 with n*n <= self (self must be >= 0)."""
        if self.sign() < 0:
            raise ValueError("floor_sqrt of a negative number")
        n = max(math.isqrt(max(int(float(self)), 0)) - 2, 0)
        while self >= (n + 1) * (n + 1):
            n += 1
        while n > 0 and self < n * n:
            n -= 1
        return n

    def ceil_sqrt(self) -> int:
        """Smallest integer n >= 0 with n*n >= self."""
        n = self.floor_sqrt()
        return n if self == n * n else n + 1

    # -- conversion ---------------------------------------------------
    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.k)

    def triple(self) -> tuple[int, int, int]:
        """Integers ``(p, q, c)`` with self = (p + q*sqrt(k)) / c and c > 0."""
        c = math.lcm(int(self.a.denominator), int(self.b.denominator))
        return int(self.a * c), int(self.b * c), c

    @classmethod
    def from_triple(cls, t: tuple[int, int, int] | list[int], k: int) -> "QuadSurd":
        p, q, c = t
        return cls(mpq(p, c), mpq(q, c), k)

    def to_str(self) -> str:
        p, q, c = self.triple()
        if q == 0:
            return str(mpq(p, c))
        return f"({p}{'+' if q >= 0 else '-'}{abs(q)}*sqrt({self.k}))/{c}"

    def __repr__(self) -> str:
        return f"QuadSurd({self.to_str()})"

    def decimal(self, digits: int = 12) -> str:
        """Decimal shadow truncated (not rounded) to ``digits`` places."""
        n = (self * 10 ** digits).floor()
        sign = "-" if n < 0 else ""
        whole, frac = divmod(abs(n), 10 ** digits)
        return f"{sign}{whole}.{frac:0{digits}d}"


SQRT2 = QuadSurd.sqrt_of(2)
SQRT85 = QuadSurd.sqrt_of(85)


def as_surd(x: Number, k: int = 2) -> QuadSurd:
    if isinstance(x, QuadSurd):
        return x
    return QuadSurd(mpq(x), 0, k)


def encode_number(x: Number) -> list[int] | str:
    """JSON form: rationals as "p/q" strings, surds as [p, q, c, k] lists."""
    if isinstance(x, QuadSurd):
        if x.b == 0:
            return str(x.a)
        p, q, c = x.triple()
        return [p, q, c, x.k]
    return str(mpq(x))


def decode_number(v: object) -> mpq | QuadSurd:
    if isinstance(v, list):
        p, q, c, k = v
        return QuadSurd.from_triple((p, q, c), k)
    return mpq(str(v))

"""Exact arithmetic in Q(sqrt2, sqrt5) and exact quaternions over it.

A field element is ``a + b*sqrt2 + c*sqrt5 + d*sqrt10`` with rational
coefficients.  Internally the four numerators share one positive
denominator, which keeps products cheap; the public accessors hand back
``Fraction`` values in lowest terms.

Unit quaternions ``w + x i + y j + z k`` are identified with SU(2) through
``alpha = w + x i`` and ``beta = y - z i`` and the matrix
``[[alpha, -conj(beta)], [beta, conj(alpha)]]``.  With this sign on ``z``
the Hamilton product is exactly the matrix product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)
SQRT10 = math.sqrt(10.0)

__all__ = [
    "FieldElement",
    "Quaternion",
    "quat_mul",
    "to_numeric",
    "ZERO",
    "ONE",
    "SQRT2_E",
    "SQRT5_E",
    "PHI",
]


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational, str)):
        return Fraction(v)
    raise TypeError(f"expected a rational, got {type(v).__name__}")


class FieldElement:
    """Element ``a + b*sqrt2 + c*sqrt5 + d*sqrt10`` of Q(sqrt2, sqrt5)."""

    __slots__ = ("_num", "_den")

    def __init__(self, a=0, b=0, c=0, d=0):
        fr = [_as_fraction(v) for v in (a, b, c, d)]
        den = math.lcm(*(f.denominator for f in fr))
        num = tuple(f.numerator * (den // f.denominator) for f in fr)
        self._num, self._den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: tuple, den: int) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._num, obj._den = _normalize(num, den)
        return obj

    # coefficient access

    @property
    def coefficients(self) -> tuple:
        """The four rational coefficients, each in lowest terms."""
        return tuple(Fraction(n, self._den) for n in self._num)

    a = property(lambda self: Fraction(self._num[0], self._den))
    b = property(lambda self: Fraction(self._num[1], self._den))
    c = property(lambda self: Fraction(self._num[2], self._den))
    d = property(lambda self: Fraction(self._num[3], self._den))

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    # ring operations

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d1, d2 = self._den, other._den
        return FieldElement._raw(
            tuple(p * d2 + q * d1 for p, q in zip(self._num, other._num)), d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(tuple(-p for p in self._num), self._den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a1, b1, c1, d1 = self._num
        a2, b2, c2, d2 = other._num
        num = (
            a1 * a2 + 2 * b1 * b2 + 5 * c1 * c2 + 10 * d1 * d2,
            a1 * b2 + b1 * a2 + 5 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
        return FieldElement._raw(num, self._den * other._den)

    __rmul__ = __mul__

    def _conj(self, s2: int, s5: int) -> "FieldElement":
        a, b, c, d = self._num
        return FieldElement._raw((a, s2 * b, s5 * c, s2 * s5 * d), self._den)

    def norm(self) -> Fraction:
        """Absolute norm down to Q: the product of all four Galois conjugates."""
        p = self * self._conj(-1, 1) * self._conj(1, -1) * self._conj(-1, -1)
        assert p.is_rational()
        return p.a

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt2, sqrt5)")
        others = self._conj(-1, 1) * self._conj(1, -1) * self._conj(-1, -1)
        n = (self * others).a
        return others * FieldElement(1 / n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison, hashing, display

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash((self._num, self._den))

    def __float__(self):
        a, b, c, d = self.coefficients
        return math.fsum((float(a), float(b) * SQRT2, float(c) * SQRT5, float(d) * SQRT10))

    def __repr__(self):
        return "FieldElement(%s)" % ", ".join(f"'{f}'" for f in self.coefficients)

    def __str__(self):
        terms = []
        for coef, sym in zip(self.coefficients, ("", "r2", "r5", "r10")):
            if coef:
                terms.append(f"{coef}{'*' + sym if sym else ''}")
        return " + ".join(terms) if terms else "0"

    def to_strings(self) -> list:
        """Coefficients as rational strings, the group-dump format."""
        return [str(f) for f in self.coefficients]


def _normalize(num: tuple, den: int):
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num, den = tuple(-p for p in num), -den
    g = math.gcd(den, *num)
    if g > 1:
        num, den = tuple(p // g for p in num), den // g
    if not any(num):
        den = 1
    return num, den


def _coerce(v):
    if isinstance(v, FieldElement):
        return v
    if isinstance(v, (int, Fraction)):
        return FieldElement(v)
    return NotImplemented


ZERO = FieldElement(0)
ONE = FieldElement(1)
SQRT2_E = FieldElement(0, 1)
SQRT5_E = FieldElement(0, 0, 1)
PHI = FieldElement(Fraction(1, 2), 0, Fraction(1, 2))


@dataclass(frozen=True)
class Quaternion:
    """Quaternion ``w + x i + y j + z k`` with coordinates in Q(sqrt2, sqrt5)."""

    w: FieldElement
    x: FieldElement = ZERO
    y: FieldElement = ZERO
    z: FieldElement = ZERO

    @classmethod
    def of(cls, w=0, x=0, y=0, z=0) -> "Quaternion":
        """Build from field elements or rationals."""
        return cls(*(v if isinstance(v, FieldElement) else FieldElement(v) for v in (w, x, y, z)))

    @property
    def coords(self) -> tuple:
        return (self.w, self.x, self.y, self.z)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return quat_mul(self, other)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> FieldElement:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self) -> "Quaternion":
        n = self.norm2().inverse()
        c = self.conjugate()
        return Quaternion(c.w * n, c.x * n, c.y * n, c.z * n)

    def alpha_beta(self) -> tuple:
        """Numeric SU(2) coordinates ``(alpha, beta)``."""
        w, x, y, z = to_numeric(self)
        return complex(w, x), complex(y, -z)

    def to_strings(self) -> list:
        return [c.to_strings() for c in self.coords]

    def __repr__(self):
        return "Quaternion(%s)" % ", ".join(str(c) for c in self.coords)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product."""
    w1, x1, y1, z1 = p.coords
    w2, x2, y2, z2 = q.coords
    return Quaternion(
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    )


def to_numeric(q: Quaternion) -> tuple:
    return tuple(float(c) for c in q.coords)

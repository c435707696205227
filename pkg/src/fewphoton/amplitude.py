"""Exact amplitude arithmetic over the ring Z[i, 1/sqrt(2)].

Every amplitude that a network of 50:50 beam splitters and mirrors can
produce has the form (a + b*sqrt(2) + i*(c + d*sqrt(2))) / 2**m with
integer a, b, c, d and m >= 0.  Working in this ring lets probabilities
like 1/64 or 9/64 come out with zero rounding error.  Circuits with
other reflectivities fall back to ordinary ``complex``.
"""

from __future__ import annotations

import math
from fractions import Fraction

_SQRT2 = math.sqrt(2.0)

# Coefficients beyond this bound signal a circuit too deep for exact mode.
_CAPACITY = 1 << 63


class CapacityError(ArithmeticError):
    """Exact coefficients exceeded the 64-bit capacity bound."""


class ExactAmp:
    """Element of Z[i, 1/sqrt(2)], kept in canonical form.

    Canonical means m == 0 or not all of a, b, c, d are even, which makes
    the representation (and hence equality) unique.
    """

    __slots__ = ("a", "b", "c", "d", "m")

    def __init__(self, a: int, b: int = 0, c: int = 0, d: int = 0, m: int = 0):
        if m < 0:
            raise ValueError("denominator exponent m must be nonnegative")
        while m > 0 and a % 2 == 0 and b % 2 == 0 and c % 2 == 0 and d % 2 == 0:
            a //= 2
            b //= 2
            c //= 2
            d //= 2
            m -= 1
        if m == 0:
            # normalize -0 style degenerate cases: nothing to do, ints are exact
            pass
        for coeff in (a, b, c, d):
            if abs(coeff) >= _CAPACITY:
                raise CapacityError(
                    "exact amplitude coefficient exceeds 2^63; "
                    "circuit too deep for exact mode"
                )
        self.a = a
        self.b = b
        self.c = c
        self.d = d
        self.m = m

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "ExactAmp":
        return cls(n)

    @classmethod
    def from_dyadic(cls, num: int, exp: int) -> "ExactAmp":
        """num / 2**exp as a real ring element."""
        return cls(num, 0, 0, 0, exp)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "ExactAmp":
        den = q.denominator
        exp = den.bit_length() - 1
        if 1 << exp != den:
            raise ValueError(f"{q} is not dyadic; not representable exactly")
        return cls(q.numerator, 0, 0, 0, exp)

    @classmethod
    def from_tuple(cls, t) -> "ExactAmp":
        a, b, c, d, m = (int(x) for x in t)
        return cls(a, b, c, d, m)

    def to_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.m)

    # -- conversions ----------------------------------------------------

    def __complex__(self) -> complex:
        scale = 0.5**self.m
        return complex(
            (self.a + self.b * _SQRT2) * scale,
            (self.c + self.d * _SQRT2) * scale,
        )

    def __float__(self) -> float:
        if not self.is_real():
            raise ValueError("amplitude has an imaginary part")
        return (self.a + self.b * _SQRT2) * 0.5**self.m

    def is_real(self) -> bool:
        return self.c == 0 and self.d == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def as_fraction(self) -> Fraction:
        """Exact rational value; requires a purely rational real element."""
        if not self.is_real() or self.b != 0:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.a, 1 << self.m)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = ExactAmp(other)
        if isinstance(other, ExactAmp):
            if self.m >= other.m:
                hi, lo = self, other
            else:
                hi, lo = other, self
            s = 1 << (hi.m - lo.m)
            return ExactAmp(
                hi.a + lo.a * s,
                hi.b + lo.b * s,
                hi.c + lo.c * s,
                hi.d + lo.d * s,
                hi.m,
            )
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "ExactAmp":
        return ExactAmp(-self.a, -self.b, -self.c, -self.d, self.m)

    def __sub__(self, other):
        if isinstance(other, (int, ExactAmp)):
            return self + (-other if isinstance(other, ExactAmp) else -other)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ExactAmp(
                self.a * other, self.b * other, self.c * other, self.d * other, self.m
            )
        if isinstance(other, ExactAmp):
            # (x1 + i y1)(x2 + i y2) with x, y in Z[sqrt2]
            a1, b1, c1, d1 = self.a, self.b, self.c, self.d
            a2, b2, c2, d2 = other.a, other.b, other.c, other.d
            re_a = a1 * a2 + 2 * b1 * b2 - (c1 * c2 + 2 * d1 * d2)
            re_b = a1 * b2 + b1 * a2 - (c1 * d2 + d1 * c2)
            im_a = a1 * c2 + 2 * b1 * d2 + c1 * a2 + 2 * d1 * b2
            im_b = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
            return ExactAmp(re_a, re_b, im_a, im_b, self.m + other.m)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "ExactAmp":
        return ExactAmp(self.a, self.b, -self.c, -self.d, self.m)

    def abs_sq(self) -> "ExactAmp":
        """|x|^2 = x * conj(x); always a real ring element."""
        return self * self.conjugate()

    def __pow__(self, n: int) -> "ExactAmp":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = ExactAmp(1)
        for _ in range(n):
            out = out * self
        return out

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = ExactAmp(other)
        elif isinstance(other, Fraction):
            try:
                other = ExactAmp.from_fraction(other)
            except ValueError:
                return False
        if isinstance(other, ExactAmp):
            return self.to_tuple() == other.to_tuple()
        if isinstance(other, (float, complex)):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.to_tuple())

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"ExactAmp{self.to_tuple()}"

    def __str__(self) -> str:
        return f"({self.a}+{self.b}√2+i({self.c}+{self.d}√2))/2^{self.m}"


# Frequently used constants.
ZERO = ExactAmp(0)
ONE = ExactAmp(1)
I = ExactAmp(0, 0, 1, 0)
SQRT2 = ExactAmp(0, 1)
INV_SQRT2 = ExactAmp(0, 1, 0, 0, 1)  # sqrt(2)/2
I_INV_SQRT2 = ExactAmp(0, 0, 0, 1, 1)  # i/sqrt(2)


def exact_mul(x: ExactAmp, y: ExactAmp) -> ExactAmp:
    return x * y


def exact_add(x: ExactAmp, y: ExactAmp) -> ExactAmp:
    return x + y


def abs_sq(x) -> "ExactAmp | float":
    """Squared magnitude, exact when the input is exact."""
    if isinstance(x, ExactAmp):
        return x.abs_sq()
    return abs(complex(x)) ** 2


def to_complex(x) -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("non-finite amplitude")
    return z


def to_float(x) -> float:
    """Real value of an amplitude or probability (exact or float)."""
    if isinstance(x, ExactAmp):
        return float(x)
    z = complex(x)
    return z.real


def sqrt_factorial(n: int, exact: bool):
    """sqrt(n!) as a ring element when possible (n <= 2), else a float."""
    if exact and n <= 1:
        return ONE
    if exact and n == 2:
        return SQRT2
    return math.sqrt(math.factorial(n))

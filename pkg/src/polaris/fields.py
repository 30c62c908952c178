"""Coefficient fields: exact rationals and prime fields F_p.

Elements are plain Python numbers so that polynomial code can use the
built-in operators: rationals are ``int`` when integral and
``fractions.Fraction`` otherwise, residues mod p are ``int`` in ``[0, p)``.
A field object knows how to canonicalize, invert and divide its elements.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]

# Default working primes.
P_SMALL = 101
P_MEDIUM = 32003
P_MAX = 2**31


class FieldError(ValueError):
    """Raised for invalid field construction or incompatible operands."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class RationalField:
    """The field Q. Canonical elements: int if integral, else reduced Fraction."""

    characteristic = 0
    p = None

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __reduce__(self):
        return (_qq, ())

    def canon(self, c: Number) -> Number:
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else c
        if isinstance(c, int):
            return c
        raise FieldError(f"not a rational number: {c!r}")

    def inv(self, c: Number) -> Number:
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.canon(Fraction(1) / c)

    def div(self, a: Number, b: Number) -> Number:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return self.canon(Fraction(a) / b)

    def from_int(self, n: int) -> Number:
        return n

    def to_mod(self, c: Number, p: int) -> int:
        """Image of ``c`` in F_p; raises if the denominator is not a unit."""
        if isinstance(c, int):
            return c % p
        den = c.denominator % p
        if den == 0:
            raise FieldError(f"bad prime {p}: divides denominator {c.denominator}")
        return c.numerator * pow(den, -1, p) % p


class PrimeField:
    """F_p for an odd prime p < 2^31."""

    characteristic: int

    def __init__(self, p: int):
        if not isinstance(p, int) or p % 2 == 0 or p >= P_MAX or not is_prime(p):
            raise FieldError(f"expected an odd prime below 2^31, got {p!r}")
        self.p = p
        self.characteristic = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __reduce__(self):
        return (GF, (self.p,))

    def canon(self, c: Number) -> int:
        if isinstance(c, Fraction):
            return QQ.to_mod(c, self.p)
        return c % self.p

    def inv(self, c: int) -> int:
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(c, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def signed(self, c: int) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        return c - self.p if c > self.p // 2 else c


QQ = RationalField()

_gf_cache: dict[int, PrimeField] = {}


def _qq() -> RationalField:
    return QQ


def GF(p: int) -> PrimeField:
    field = _gf_cache.get(p)
    if field is None:
        field = _gf_cache[p] = PrimeField(p)
    return field


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """Find n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    frac = Fraction(r1, s1)
    if (frac.numerator - a * frac.denominator) % m:
        return None
    return frac


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int]:
    """Combine x = a1 mod m1 and x = a2 mod m2 for coprime moduli."""
    t = (a2 - a1) * pow(m1, -1, m2) % m2
    return a1 + m1 * t, m1 * m2

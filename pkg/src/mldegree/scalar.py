"""Exact scalars: a word-sized prime field and arbitrary-precision rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRIME = 2147483647
DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)

# Deterministic Miller-Rabin: witnesses 2, 3, 5, 7 suffice below 3_215_031_751.
_MR_WITNESSES = (2, 3, 5, 7)

Rational = Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A prime 2 < p < 2**31, validated on construction."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 < self.p < 2**31:
            raise ValueError(f"modulus must be an integer in (2, 2**31), got {self.p!r}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)

    def inv(self, a: int) -> int:
        """Inverse of a raw residue; raises ZeroDivisionError on 0."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse modulo {self.p}")
        return pow(a, self.p - 2, self.p)

    def reduce(self, q: Fraction) -> int:
        """Image of a rational under Z_(p) -> F_p."""
        q = Fraction(q)
        return q.numerator % self.p * self.inv(q.denominator) % self.p


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise ValueError(f"value {self.value} not reduced modulo {self.modulus.p}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("field elements over different primes")
            return other.value
        if isinstance(other, int):
            return other % self.modulus.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement((self.value + b) % self.modulus.p, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement((self.value - b) % self.modulus.p, self.modulus)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement((b - self.value) % self.modulus.p, self.modulus)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value * b % self.modulus.p, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.modulus.p, self.modulus)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self * field_inv(FieldElement(b, self.modulus))

    def __pow__(self, k: int):
        if k < 0:
            return field_inv(self) ** (-k)
        return FieldElement(pow(self.value, k, self.modulus.p), self.modulus)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.p})"


def field_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.modulus.inv(a.value), a.modulus)


def rational_normalize(num: int, den: int) -> Fraction:
    """Reduced fraction with positive denominator; ``den == 0`` raises ZeroDivisionError."""
    return Fraction(num, den)

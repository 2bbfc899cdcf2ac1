"""Closed-form ML-degrees and their assembly from intersection numbers on complete quadrics.

Everything here is exact: integers, or polynomials in ``n`` with
:class:`fractions.Fraction` coefficients.

The intersection numbers ``int H1^a H2^b H_{n-1}^{N-a-b}`` are only known for
``a + b <= 3``; outside that range the functions raise instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

SUPPORTED_M = (2, 3, 4)

# One linear equation in the single coefficient of Sigma = l*B: exactly one solution.
ML_1 = 1


class UnsupportedRange(ValueError):
    """Requested value lies outside what the intersection-number table covers."""


# -- polynomials in n ------------------------------------------------------------


@dataclass(frozen=True)
class PolyN:
    """Univariate polynomial in ``n``; ``coeffs[k]`` multiplies ``n**k``."""

    coeffs: tuple

    @classmethod
    def of(cls, coeffs: Sequence) -> PolyN:
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @classmethod
    def const(cls, c) -> PolyN:
        return cls.of([c])

    def __add__(self, other) -> PolyN:
        if not isinstance(other, PolyN):
            other = PolyN.const(other)
        k = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (k - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (k - len(other.coeffs))
        return PolyN.of([x + y for x, y in zip(a, b)])

    def __neg__(self) -> PolyN:
        return PolyN.of([-x for x in self.coeffs])

    __radd__ = __add__

    def __sub__(self, other) -> PolyN:
        return self + (-other)

    def __rsub__(self, other) -> PolyN:
        return -self + other

    def __mul__(self, other) -> PolyN:
        if not isinstance(other, PolyN):
            return PolyN.of([x * other for x in self.coeffs])
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return PolyN.of(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> PolyN:
        out = PolyN.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c:
                mono = {0: "", 1: "n"}.get(k, f"n^{k}")
                parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts).replace("+ -", "- ") or "0"


N = PolyN.of([0, 1])

# The closed forms, lowest degree first.
ML_FORMULAS = {
    2: PolyN.of([-3, 2]),
    3: PolyN.of([7, -9, 3]),
    4: PolyN.of([-15, Fraction(85, 3), -18, Fraction(11, 3)]),
}


def _check_m(m: int):
    if m not in SUPPORTED_M:
        raise UnsupportedRange(f"m = {m} not supported; choose one of {SUPPORTED_M}")


def ml_formula_poly(m: int) -> PolyN:
    _check_m(m)
    return ML_FORMULAS[m]


def ml_formula(m: int, n: int) -> int:
    """Generic ML-degree of an ``m``-dimensional linear covariance model of ``n x n`` matrices.

    Only meaningful when ``m <= C(n+1, 2)``; below that the polynomial is still
    evaluated (``ml_formula(4, 2) == -1``).
    """
    _check_m(m)
    if n < 2:
        raise ValueError("n must be at least 2")
    value = ML_FORMULAS[m](n)
    assert value.denominator == 1, f"non-integral ML degree {value} at m={m}, n={n}"
    return int(value)


def delta(n: int) -> int:
    """Degree of the variety of symmetric ``n x n`` matrices of corank at least 2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return comb(n + 1, 3)


def delta_poly() -> PolyN:
    return (N + 1) * N * (N - 1) * Fraction(1, 6)


# -- intersection numbers -------------------------------------------------------------


def _check_ab(a: int, b: int):
    if a < 0 or b < 0:
        raise ValueError("exponents must be non-negative")
    if a + b > 3:
        raise UnsupportedRange(f"intersection number for a + b = {a + b} > 3 is not available")


def intersection_number(a: int, b: int, n: int) -> int:
    """``int H1^a H2^b H_{n-1}^{N-a-b}`` for ``a + b <= 3``.

    A generic linear space of matrices met with ``a`` hypersurfaces of degree
    ``n-1`` and ``b`` of degree ``n-2``; for ``a = 3`` the base locus of ``H1``
    (corank-2 matrices) is unavoidable and its degree is removed.
    """
    _check_ab(a, b)
    return (n - 1) ** a * (n - 2) ** b - (delta(n) if a == 3 else 0)


def intersection_poly(a: int, b: int) -> PolyN:
    _check_ab(a, b)
    out = (N - 1) ** a * (N - 2) ** b
    return out - delta_poly() if a == 3 else out


@dataclass(frozen=True)
class SegreClass:
    """``sum coeff * H1^a H2^b`` with ``a + b = m - 1``."""

    m: int
    monomials: tuple  # (a, b, coeff)

    def __post_init__(self):
        for a, b, _ in self.monomials:
            if a + b != self.m - 1:
                raise ValueError(f"monomial H1^{a} H2^{b} has wrong degree for m = {self.m}")

    def integrate(self, n: int) -> int:
        return sum(c * intersection_number(a, b, n) for a, b, c in self.monomials)

    def integrate_poly(self) -> PolyN:
        out = PolyN.const(0)
        for a, b, c in self.monomials:
            out = out + intersection_poly(a, b) * c
        return out


def segre_corrected(m: int) -> SegreClass:
    """``s_{m-1}(H1, H2)``: the complete homogeneous polynomial, every coefficient 1."""
    return SegreClass(m, tuple((a, m - 1 - a, 1) for a in range(m - 1, -1, -1)))


def segre_naive(m: int) -> SegreClass:
    """``s_{m-1}(H1, 2 H1) = (1 + 2 + ... + 2^(m-1)) H1^(m-1)``."""
    return SegreClass(m, ((m - 1, 0, 2**m - 1),))


def excess_contribution(m: int, i: int, n: int) -> int:
    """Contribution of the exceptional divisor ``E_i`` to the degeneracy locus.

    ``E_1`` never contributes; ``E_i`` is missed by a generic ``P^(m-1)`` when
    ``m <= C(i+1, 2)``. The only non-zero value known here is ``E_2`` at ``m = 4``.
    """
    if i < 1:
        raise ValueError("exceptional divisors are numbered from 1")
    if i == 1 or m <= comb(i + 1, 2):
        return 0
    if m == 4 and i == 2:
        return delta(n)
    raise UnsupportedRange(f"contribution of E_{i} at m = {m} is not available")


def ml_via_intersection(m: int, n: int) -> int:
    _check_m(m)
    total = segre_corrected(m).integrate(n)
    # E_2 is kept even for n = 2 so the value stays the polynomial in n
    return total - sum(excess_contribution(m, i, n) for i in range(1, max(n, 3)))


def ml_via_intersection_poly(m: int) -> PolyN:
    _check_m(m)
    out = segre_corrected(m).integrate_poly()
    return out - delta_poly() if m == 4 else out


def ml_naive(m: int, n: int) -> int:
    """The uncorrected count from ``s_{m-1}(H1, 2 H1)``; overcounts the ML-degree."""
    _check_m(m)
    return segre_naive(m).integrate(n)


def expand_ml4_assembly() -> PolyN:
    """``(n-2)^3 + (n-1)(n-2)^2 + (n-1)^2(n-2) + (n-1)^3 - 2 C(n+1, 3)`` expanded."""
    return ml_via_intersection_poly(4)

from fractions import Fraction
from math import comb

import pytest
import sympy

from mldegree.enumerative import (
    ML_1,
    ML_FORMULAS,
    N,
    PolyN,
    UnsupportedRange,
    delta,
    excess_contribution,
    expand_ml4_assembly,
    intersection_number,
    ml_formula,
    ml_naive,
    ml_via_intersection,
    ml_via_intersection_poly,
    segre_corrected,
    segre_naive,
)

n_sym = sympy.Symbol("n")


@pytest.mark.parametrize("m,n,expected", [(2, 5, 7), (3, 4, 19), (4, 4, 45), (4, 3, 7), (4, 5, 135), (3, 3, 7), (2, 3, 3)])
def test_ml_formula_values(m, n, expected):
    assert ml_formula(m, n) == expected


@pytest.mark.parametrize("m", [0, 1, 5])
def test_ml_formula_unsupported(m):
    with pytest.raises(UnsupportedRange):
        ml_formula(m, 4)


def test_ml1_constant():
    assert ML_1 == 1


def test_formula_degree_is_m_minus_1():
    for m, f in ML_FORMULAS.items():
        assert f.degree == m - 1


def test_integrality_large_range():
    for m in (2, 3, 4):
        f = ML_FORMULAS[m]
        for n in range(2, 10_001):
            assert f(n).denominator == 1


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 4), (4, 10), (5, 20)])
def test_delta(n, expected):
    assert delta(n) == expected


def test_intersection_number_examples():
    assert intersection_number(1, 1, 4) == 6
    assert intersection_number(3, 0, 3) == 4
    for n in range(2, 9):
        assert intersection_number(0, 0, n) == 1
        assert intersection_number(0, 3, n) == (n - 2) ** 3
        assert intersection_number(1, 2, n) == (n - 1) * (n - 2) ** 2
        assert intersection_number(2, 1, n) == (n - 1) ** 2 * (n - 2)
        assert intersection_number(3, 0, n) == (n - 1) ** 3 - comb(n + 1, 3)


@pytest.mark.parametrize("a,b", [(4, 0), (2, 2), (0, 4), (-1, 0)])
def test_intersection_number_out_of_range(a, b):
    with pytest.raises(ValueError):
        intersection_number(a, b, 5)


def test_segre_classes_from_generating_series():
    # s_k(x, y) is the degree-k part of 1 / ((1 - x)(1 - y)); expand with sympy
    x, y = sympy.symbols("x y")
    series = sympy.series(sympy.series(1 / ((1 - x) * (1 - y)), x, 0, 5).removeO(), y, 0, 5).removeO()
    for m in (1, 2, 3, 4):
        k = m - 1
        part = sympy.Poly(series, x, y).as_dict()
        expected = {(a, b): c for (a, b), c in part.items() if a + b == k}
        got = {(a, b): c for a, b, c in segre_corrected(m).monomials}
        assert got == expected
        naive = sympy.expand(sum(c * x**a * (2 * x) ** b for (a, b), c in expected.items()))
        assert {(a, b): c for a, b, c in segre_naive(m).monomials} == {(k, 0): int(naive.coeff(x, k))}


def test_segre_class_degree_checked():
    from mldegree.enumerative import SegreClass

    with pytest.raises(ValueError):
        SegreClass(3, ((1, 0, 1),))


@pytest.mark.parametrize("n,expected", [(3, 3), (4, 5), (10, 17)])
def test_ml_via_intersection_m2(n, expected):
    assert ml_via_intersection(2, n) == expected == (n - 1) + (n - 2)


def test_ml_via_intersection_m4_examples():
    assert ml_via_intersection(4, 3) == (1 + 2 + 4 + (8 - 4)) - 4 == 7
    assert ml_via_intersection(4, 4) == (8 + 12 + 18 + (27 - 10)) - 10 == 45


def test_ml_via_intersection_matches_formula():
    for m in (2, 3, 4):
        for n in range(2, 101):
            assert ml_via_intersection(m, n) == ml_formula(m, n)


def test_excess_contributions():
    for n in range(3, 10):
        assert excess_contribution(4, 1, n) == 0
        assert excess_contribution(3, 2, n) == 0
        assert excess_contribution(4, 2, n) == delta(n)
        assert excess_contribution(4, 3, n) == 0
    with pytest.raises(UnsupportedRange):
        excess_contribution(5, 2, 4)


@pytest.mark.parametrize("m,n,expected", [(2, 3, 6), (3, 3, 28), (4, 3, 60)])
def test_ml_naive_examples(m, n, expected):
    assert ml_naive(m, n) == expected


def test_naive_overcounts():
    for m in (2, 3, 4):
        for n in range(3, 101):
            assert ml_naive(m, n) > ml_via_intersection(m, n)


def test_ml4_assembly_against_sympy():
    n = n_sym
    assembly = (n - 2) ** 3 + (n - 1) * (n - 2) ** 2 + (n - 1) ** 2 * (n - 2) + (n - 1) ** 3 - 2 * sympy.binomial(n + 1, 3)
    coeffs = sympy.Poly(sympy.expand_func(assembly), n).all_coeffs()[::-1]
    assert [Fraction(int(c.p), int(c.q)) for c in coeffs] == list(expand_ml4_assembly().coeffs)
    assert expand_ml4_assembly().coeffs == (Fraction(-15), Fraction(85, 3), Fraction(-18), Fraction(11, 3))
    assert expand_ml4_assembly()(5) == 135


def test_m2_m3_polynomial_identities():
    assert ml_via_intersection_poly(2) == PolyN.of([-3, 2])
    assert ml_via_intersection_poly(3) == PolyN.of([7, -9, 3])
    assert (N - 1) ** 2 + (N - 1) * (N - 2) + (N - 2) ** 2 == ML_FORMULAS[3]


def test_polyn_printing():
    assert str(ML_FORMULAS[4]) == "11/3*n^3 - 18*n^2 + 85/3*n - 15"
    assert str(PolyN.of([])) == "0"

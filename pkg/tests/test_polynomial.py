from fractions import Fraction

import pytest
from sympy import QQ

from dunkl_intertwining.exceptions import NonPolynomialResultException
from dunkl_intertwining.partition import Partition
from dunkl_intertwining.polynomial import Polynomial, polynomial_ring


def x(i, n_vars=3):
    return Polynomial.variable(n_vars, i)


def test_zero_terms_are_dropped():
    p = Polynomial(2, {(1, 0): 1, (0, 1): 0})
    assert p.terms == {(1, 0): Fraction(1)}
    assert not Polynomial(2, {(1, 1): 0})


def test_arithmetic():
    p = x(0) + x(1)
    assert p * p == x(0) * x(0) + x(0) * x(1) * 2 + x(1) * x(1)
    assert p - p == Polynomial(3)
    assert (p * Fraction(1, 2)).terms == {(1, 0, 0): Fraction(1, 2), (0, 1, 0): Fraction(1, 2)}


def test_derivative_and_shift():
    p = Polynomial(2, {(3, 1): 2})
    assert p.derivative(0) == Polynomial(2, {(2, 1): 6})
    assert p.derivative(1) == Polynomial(2, {(3, 0): 2})
    assert p.shift(1, 2) == Polynomial(2, {(3, 3): 2})


def test_swap_exchanges_coordinates():
    p = Polynomial(3, {(2, 1, 0): 1})
    assert p.swap(0, 2) == Polynomial(3, {(0, 1, 2): 1})


def test_divide_by_difference():
    numerator = x(0) * x(0) - x(1) * x(1)
    assert numerator.divide_by_difference(0, 1) == x(0) + x(1)
    cubic = Polynomial(2, {(3, 0): 1, (0, 3): -1})
    assert cubic.divide_by_difference(0, 1) == Polynomial(2, {(2, 0): 1, (1, 1): 1, (0, 2): 1})


def test_divide_by_difference_multiplies_back():
    p = Polynomial(3, {(4, 1, 2): 3, (1, 4, 2): -3, (2, 0, 1): 5, (0, 2, 1): -5})
    quotient = p.divide_by_difference(0, 1)
    assert quotient * (x(0) - x(1)) == p


def test_divide_by_difference_rejects_remainder():
    with pytest.raises(NonPolynomialResultException) as excinfo:
        (x(0) * x(0)).divide_by_difference(0, 1)
    assert excinfo.value.pair == (0, 1)
    with pytest.raises(NonPolynomialResultException):
        Polynomial(3, {(1, 1, 0): 1}).divide_by_difference(0, 1)


def test_monomial_symmetric_terms():
    m21 = Polynomial.monomial_symmetric(Partition.of(2, 1), 3)
    assert len(m21.terms) == 6
    assert m21.is_homogeneous(3)


def test_monomial_basis_projection():
    coefficients = {Partition.of(2): Fraction(3), Partition.of(1, 1): Fraction(-1, 2)}
    p = Polynomial.from_monomial_basis(coefficients, 3)
    assert p.to_monomial_basis() == coefficients


def test_projection_detects_asymmetry():
    with pytest.raises(ValueError):
        Polynomial(2, {(2, 0): 1}).to_monomial_basis()


def test_evaluate_exact_and_float():
    p = Polynomial(2, {(2, 0): Fraction(1, 2), (0, 1): 3})
    assert p.evaluate([Fraction(2), Fraction(1, 3)]) == Fraction(3)
    assert isinstance(p.evaluate([1, Fraction(1, 2)]), Fraction)
    assert p.evaluate([2.0, 1.0]) == pytest.approx(5.0)


def test_degrees():
    p = Polynomial(2, {(2, 0): 1, (0, 1): 1})
    assert p.degrees == {1, 2}
    assert not p.is_homogeneous()
    assert Polynomial(2).is_homogeneous(5)


def test_polynomials_share_one_rational_ring_per_arity():
    p = Polynomial(3, {(1, 0, 2): Fraction(2, 3)})
    assert p.ring is polynomial_ring(3)
    assert p.ring.domain == QQ
    assert p.ring.ngens == 3
    assert (p + x(1)).ring is p.ring


def test_divide_by_difference_of_non_adjacent_pair():
    numerator = x(0) * x(2) * x(2) - x(2) * x(0) * x(0)
    assert numerator.divide_by_difference(2, 0) == x(0) * x(2)
    assert numerator.swap(0, 2) == -numerator

from fractions import Fraction
from math import factorial

import pytest

from dunkl_intertwining.classes.jack_polynomial import JackPolynomial
from dunkl_intertwining.exceptions import NegativeParameterException, OutOfRangeException, PartitionTooLongException
from dunkl_intertwining.jack import (
    apply_operator,
    jack_c_normalized,
    jack_expansion,
    jack_rows,
    operator_matrix,
    printed_eigenvalue,
    stanley_eigenvalue,
)
from dunkl_intertwining.partition import Partition, enumerate_partitions, partition_factorial
from dunkl_intertwining.polynomial import Polynomial
from dunkl_intertwining.symfunc import elementary_in_monomials, eval_monomial, eval_schur, jack_at_ones

ALPHAS = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("n_vars", [2, 3, 4])
def test_degree_two_row(alpha, n_vars):
    row = jack_expansion(Partition.of(2), alpha, n_vars)
    assert row.coefficient(Partition.of(2)) == 1
    assert row.coefficient(Partition.of(1, 1)) == 2 / (1 + alpha)


def test_three_halves_example():
    assert jack_expansion(Partition.of(2), Fraction(3, 2), 2).u[Partition.of(1, 1)] == Fraction(4, 5)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_single_column_is_elementary(alpha):
    row = jack_expansion(Partition.of(1, 1, 1), alpha, 4)
    assert row.u == {Partition.of(1, 1, 1): 1}


@pytest.mark.parametrize("tau", [tau for n in range(1, 5) for tau in enumerate_partitions(n, 4)])
def test_vanishing_alpha_gives_elementary_functions(tau):
    row = jack_expansion(tau, Fraction(1, 10**9), 4).u
    elementary = elementary_in_monomials(tau.conjugate, 4)
    for lam in set(row) | set(elementary):
        assert abs(row.get(lam, 0) - elementary.get(lam, 0)) <= Fraction(1, 10**6)

def test_schur_rows_at_alpha_one():
    row = jack_expansion(Partition.of(2, 1), 1, 3).u
    assert row == {Partition.of(2, 1): 1, Partition.of(1, 1, 1): 2}
    row = jack_expansion(Partition.of(3), 1, 3).u
    assert row == {Partition.of(3): 1, Partition.of(2, 1): 1, Partition.of(1, 1, 1): 1}


@pytest.mark.parametrize("n_vars", [2, 3, 4])
@pytest.mark.parametrize("tau", enumerate_partitions(4, 4))
def test_alpha_one_matches_bialternant(n_vars, tau):
    if tau.length > n_vars:
        pytest.skip("too long")
    point = [0.7, 1.3, 1.9, 2.6][:n_vars]
    row = jack_expansion(tau, 1, n_vars).u
    value = sum(float(u) * eval_monomial(lam, point) for lam, u in row.items())
    assert value == pytest.approx(eval_schur(tau, point), rel=1e-10)


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(1), Fraction(2)])
@pytest.mark.parametrize("tau", [Partition.of(3), Partition.of(2, 1), Partition.of(2, 2), Partition.of(3, 1, 1)])
def test_eigenrelation_is_exact(alpha, tau):
    jack = JackPolynomial(tau, alpha, 3)
    assert not jack.eigenrelation_residual()


def test_rows_are_triangular():
    for tau, expansion in jack_rows(5, Fraction(1, 3), 3).items():
        assert expansion.coefficient(tau) == 1
        assert all(lam.parts <= tau.parts for lam in expansion.u)


def test_operator_matrix_matches_direct_application():
    k = Fraction(2, 3)
    for mu, row in operator_matrix(3, 3, k).items():
        image = apply_operator(Polynomial.monomial_symmetric(mu, 3), k)
        assert image.to_monomial_basis() == row


def test_printed_eigenvalue_differs_by_degree_constant():
    k, n_vars = Fraction(3, 4), 4
    partitions = enumerate_partitions(4, n_vars)
    shifts = {stanley_eigenvalue(tau, k, n_vars) - printed_eigenvalue(tau, k, n_vars) for tau in partitions}
    assert shifts == {(2 * k - 1) * 4 * (n_vars - 1)}


def test_c_normalized_rows_sum_to_power_sum():
    # sum over |tau| = n of C_tau is (x_1 + ... + x_N)^n = sum n!/lam! m_lam
    n, n_vars, alpha = 4, 3, Fraction(2, 5)
    total: dict[Partition, Fraction] = {}
    for tau in enumerate_partitions(n, n_vars):
        for lam, c in jack_c_normalized(tau, alpha, n_vars).items():
            total[lam] = total.get(lam, Fraction(0)) + c
    expected = {lam: Fraction(factorial(n), partition_factorial(lam)) for lam in enumerate_partitions(n, n_vars)}
    assert {lam: c for lam, c in total.items() if c} == expected


def test_value_at_ones_matches_row():
    jack = JackPolynomial(Partition.of(2, 1), Fraction(1, 2), 3)
    assert jack.value_at_ones == jack.polynomial.evaluate([1, 1, 1])
    assert jack.evaluate([1.0, 1.0, 1.0]) == pytest.approx(float(jack_at_ones(Partition.of(2, 1), Fraction(1, 2), 3)))


def test_wrapper_exposes_expansion():
    jack = JackPolynomial(Partition.of(2), "3/2", 2)
    assert jack.alpha == Fraction(3, 2)
    assert jack.coefficients[Partition.of(1, 1)] == Fraction(4, 5)
    assert jack.as_sympoly().to_monomial().coefficients == jack.coefficients
    with pytest.raises(OutOfRangeException):
        jack.evaluate([1.0, 2.0, 3.0])


def test_errors():
    with pytest.raises(PartitionTooLongException):
        jack_expansion(Partition.of(1, 1, 1), 1, 2)
    with pytest.raises(NegativeParameterException):
        jack_expansion(Partition.of(2), 0, 2)

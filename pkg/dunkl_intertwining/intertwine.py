"""The type-A intertwining operator V_k on symmetric polynomials.

V_k m_lambda is given exactly as a combination of Jack polynomials P_tau^(1/k)
and returned expanded over monomial symmetric functions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from dunkl_intertwining.exceptions import (
    NegativeParameterException,
    PartitionTooLongException,
    UnsupportedCaseException,
)
from dunkl_intertwining.jack import jack_expansion
from dunkl_intertwining.partition import (
    Partition,
    enumerate_partitions,
    multiplicity_count,
    partition_factorial,
)
from dunkl_intertwining.polynomial import Polynomial
from dunkl_intertwining.symfunc import Basis, SymPoly, as_exact, hook_products, pochhammer_general
from dunkl_intertwining.typing import ExactLike, ExactScalar, VectorLike

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntertwineResult:
    lam: Partition
    k: ExactScalar
    n_vars: int
    output: SymPoly

    def coefficient(self, mu: Partition) -> Fraction:
        return self.output.coefficients.get(mu, Fraction(0))

    def polynomial(self) -> Polynomial:
        return Polynomial.from_monomial_basis(self.output.coefficients, self.n_vars)


@dataclass(frozen=True)
class IntertwineLimit:
    """lim_{k->inf} V_k m_lambda = coefficient * e_1(x)^power."""

    lam: Partition
    n_vars: int
    coefficient: ExactScalar
    power: int
    e1_power: dict[Partition, Fraction]

    def as_sympoly(self) -> SymPoly:
        return SymPoly(
            Basis.MONOMIAL,
            self.power,
            self.n_vars,
            {mu: self.coefficient * a for mu, a in self.e1_power.items()},
        )


def jack_weight(tau: Partition, k: ExactLike, n_vars: int) -> ExactScalar:
    """c_tau(1/k) / (c'_tau(1/k) (kN)_tau^(1/k)), the Jack weight in the kernel series."""
    k = as_exact(k)
    alpha = 1 / k
    c, c_prime = hook_products(tau, alpha)
    return c / (c_prime * pochhammer_general(k * n_vars, tau, alpha))


def _check_inputs(lam: Partition, k: Fraction, n_vars: int) -> None:
    if k < 0:
        raise NegativeParameterException("k", k)
    if lam.length > n_vars:
        raise PartitionTooLongException(lam.length, n_vars)


@lru_cache(maxsize=None)
def intertwine_monomial(lam: Partition, k: ExactLike, n_vars: int) -> IntertwineResult:
    """V_k m_lambda over the monomial basis, with exact rational coefficients.

    Args:
        lam (Partition): The monomial symmetric function index, l(lam) <= N.
        k (ExactLike): The multiplicity parameter, k >= 0. k = 0 gives the identity.
        n_vars (int): The number of variables N.

    Raises:
        NegativeParameterException: k < 0.
        PartitionTooLongException: l(lam) > N.

    Returns:
        IntertwineResult: A homogeneous result of degree |lam|.
    """
    k = as_exact(k)
    _check_inputs(lam, k, n_vars)
    degree = lam.modulus
    if k == 0:
        return IntertwineResult(lam, k, n_vars, SymPoly(Basis.MONOMIAL, degree, n_vars, {lam: Fraction(1)}))

    alpha = 1 / k
    prefactor = partition_factorial(lam) * multiplicity_count(lam, n_vars)
    out: dict[Partition, Fraction] = {}
    for tau in enumerate_partitions(degree, n_vars):
        row = jack_expansion(tau, alpha, n_vars).u
        u_lam = row.get(lam)
        if u_lam is None:
            continue
        scale = prefactor * jack_weight(tau, k, n_vars) * u_lam
        for mu, u_mu in row.items():
            out[mu] = out.get(mu, Fraction(0)) + scale * u_mu
    return IntertwineResult(lam, k, n_vars, SymPoly(Basis.MONOMIAL, degree, n_vars, out))


def intertwine_polynomial(poly: Polynomial, k: ExactLike) -> Polynomial:
    """V_k applied to any symmetric polynomial, by linearity over its monomial expansion."""
    out = Polynomial(poly.n_vars)
    for mu, coeff in poly.to_monomial_basis().items():
        out = out + intertwine_monomial(mu, as_exact(k), poly.n_vars).polynomial() * coeff
    return out


def intertwine_limit(lam: Partition, n_vars: int) -> IntertwineLimit:
    """The strong-coupling limit M(lam, N) / N^|lam| * e_1^|lam|.

    The power of e_1 is expanded through the multinomial identity
    e_1^n = sum_tau n!/tau! m_tau.
    """
    if lam.length > n_vars:
        raise PartitionTooLongException(lam.length, n_vars)
    n = lam.modulus
    coefficient = Fraction(multiplicity_count(lam, n_vars), n_vars**n)
    e1_power = {tau: Fraction(factorial(n), partition_factorial(tau)) for tau in enumerate_partitions(n, n_vars)}
    return IntertwineLimit(lam, n_vars, coefficient, n, e1_power)


def dunkl_operator(f: Polynomial, i: int, k: ExactLike) -> Polynomial:
    """T_i f = d_i f + k sum_{j != i} (f - f(sigma_ij x)) / (x_i - x_j), exactly."""
    k = as_exact(k)
    out = f.derivative(i)
    for j in range(f.n_vars):
        if j == i:
            continue
        difference = f - f.swap(i, j)
        if not difference:
            continue
        quotient = difference.divide_by_difference(i, j) if i < j else -difference.divide_by_difference(j, i)
        out = out + quotient * k
    return out


def dunkl_laplacian(f: Polynomial, k: ExactLike) -> Polynomial:
    out = Polynomial(f.n_vars)
    for i in range(f.n_vars):
        out = out + dunkl_operator(dunkl_operator(f, i, k), i, k)
    return out


@dataclass(frozen=True)
class IntertwiningCheck:
    lam: Partition
    k: ExactScalar
    n_vars: int
    gradient_residual: Polynomial
    laplacian_residual: Polynomial

    @property
    def ok(self) -> bool:
        return not self.gradient_residual and not self.laplacian_residual


def check_intertwining(lam: Partition, k: ExactLike, n_vars: int) -> IntertwiningCheck:
    """Exact residuals of sum_i T_i V_k = V_k sum_i d_i and sum_i T_i^2 V_k = V_k Laplacian on m_lam."""
    k = as_exact(k)
    m_lam = Polynomial.monomial_symmetric(lam, n_vars)
    image = intertwine_monomial(lam, k, n_vars).polynomial()

    gradient = Polynomial(n_vars)
    laplacian = Polynomial(n_vars)
    dunkl_gradient = Polynomial(n_vars)
    for i in range(n_vars):
        gradient = gradient + m_lam.derivative(i)
        laplacian = laplacian + m_lam.derivative(i).derivative(i)
        dunkl_gradient = dunkl_gradient + dunkl_operator(image, i, k)

    gradient_residual = dunkl_gradient - intertwine_polynomial(gradient, k)
    laplacian_residual = dunkl_laplacian(image, k) - intertwine_polynomial(laplacian, k)
    return IntertwiningCheck(lam, k, n_vars, gradient_residual, laplacian_residual)


class NonSymCase(Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


def nonsym_reference(case: NonSymCase, i: int, k: float, x: VectorLike) -> float:
    """Closed forms of V_k x_i (any N) and V_k x_i^2 (N = 2, 3), evaluated at x.

    Args:
        case (NonSymCase): LINEAR for V_k x_i, QUADRATIC for V_k x_i^2.
        i (int): The 0-based coordinate index.
        k (float): The multiplicity parameter.
        x (VectorLike): The evaluation point; its length is N.

    Raises:
        UnsupportedCaseException: QUADRATIC with N not in {2, 3}.
    """
    v = np.asarray(x, dtype=np.float64)
    n_vars = len(v)
    s = float(np.sum(v))
    xi = float(v[i])
    match case:
        case NonSymCase.LINEAR:
            return (xi + k * s) / (1 + n_vars * k)
        case NonSymCase.QUADRATIC if n_vars == 2:
            return (2 * xi**2 + k * s**2) / (2 * (1 + 2 * k))
        case NonSymCase.QUADRATIC if n_vars == 3:
            norm_sq = float(v @ v)
            return (2 * xi * (xi + k * s) + k * (norm_sq + k * s**2)) / ((2 + 3 * k) * (1 + 3 * k))
        case _:
            raise UnsupportedCaseException(f"no closed form for {case.value} with N={n_vars}")

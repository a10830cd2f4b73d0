"""Jack polynomials in the P normalization, expanded over monomial symmetric functions.

The expansion row u_{tau lambda}(alpha) is obtained from the eigenoperator

    D_k = sum_i x_i^2 d_i^2 + 2k sum_{i != j} x_i^2 / (x_i - x_j) d_i,   k = 1/alpha,

whose matrix on the monomial basis is computed by exact symbolic expansion and
then back-solved along the dominance order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from dunkl_intertwining.exceptions import (
    DegenerateSpectrumException,
    NegativeParameterException,
    PartitionTooLongException,
)
from dunkl_intertwining.partition import Partition, dominated_by, enumerate_partitions
from dunkl_intertwining.polynomial import Polynomial
from dunkl_intertwining.symfunc import as_exact, jack_c_from_p
from dunkl_intertwining.typing import ExactLike, ExactScalar

logger = logging.getLogger(__name__)

OperatorMatrix = dict[Partition, dict[Partition, Fraction]]


@dataclass(frozen=True)
class JackExpansion:
    tau: Partition
    alpha: ExactScalar
    n_vars: int
    u: dict[Partition, Fraction]
    eigenvalue: ExactScalar

    def coefficient(self, lam: Partition) -> Fraction:
        return self.u.get(lam, Fraction(0))

    def polynomial(self) -> Polynomial:
        return Polynomial.from_monomial_basis(self.u, self.n_vars)


def stanley_eigenvalue(tau: Partition, k: ExactLike, n_vars: int) -> ExactScalar:
    """Eigenvalue of D_k on P_tau^(1/k) in N variables."""
    k = as_exact(k)
    return sum(
        (Fraction(part * (part - 1)) - 2 * k * (j * part) for j, part in enumerate(tau.parts)),
        start=Fraction(0),
    ) + 2 * k * (n_vars - 1) * tau.modulus


def printed_eigenvalue(tau: Partition, k: ExactLike, n_vars: int) -> ExactScalar:
    """sum_j tau_j [tau_j - 1 - 2k(j-1)] + |tau|(N-1).

    Differs from stanley_eigenvalue only by (2k - 1)|tau|(N-1), a constant on each
    degree, so eigenvalue gaps within a degree agree.
    """
    k = as_exact(k)
    return sum(
        (part * (part - 1 - 2 * k * j) for j, part in enumerate(tau.parts)),
        start=Fraction(0),
    ) + tau.modulus * (n_vars - 1)


@lru_cache(maxsize=None)
def _operator_parts(degree: int, n_vars: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Monomial-basis matrices of sum_i x_i^2 d_i^2 and of sum_{i<j} (x_i^2 d_i - x_j^2 d_j)/(x_i - x_j).

    Entry [mu][lam] is the coefficient of m_lam in the image of m_mu.
    """
    second: OperatorMatrix = {}
    exchange: OperatorMatrix = {}
    for mu in enumerate_partitions(degree, n_vars):
        m_mu = Polynomial.monomial_symmetric(mu, n_vars)
        diagonal = Polynomial(n_vars)
        pairwise = Polynomial(n_vars)
        for i in range(n_vars):
            diagonal = diagonal + m_mu.derivative(i).derivative(i).shift(i, 2)
        for i in range(n_vars):
            for j in range(i + 1, n_vars):
                numerator = m_mu.derivative(i).shift(i, 2) - m_mu.derivative(j).shift(j, 2)
                pairwise = pairwise + numerator.divide_by_difference(i, j)
        second[mu] = diagonal.to_monomial_basis(check=False)
        exchange[mu] = pairwise.to_monomial_basis(check=False)
    logger.debug("operator matrix built for degree %d, N=%d (%d partitions)", degree, n_vars, len(second))
    return second, exchange


def operator_matrix(degree: int, n_vars: int, k: ExactLike) -> OperatorMatrix:
    """b_{mu lam}: coefficient of m_lam in D_k m_mu."""
    k = as_exact(k)
    second, exchange = _operator_parts(degree, n_vars)
    result: OperatorMatrix = {}
    for mu in second:
        row = dict(second[mu])
        for lam, coeff in exchange[mu].items():
            row[lam] = row.get(lam, Fraction(0)) + 2 * k * coeff
        result[mu] = {lam: c for lam, c in row.items() if c != 0}
    return result


def apply_operator(poly: Polynomial, k: ExactLike) -> Polynomial:
    """D_k applied to an arbitrary symmetric polynomial, by direct symbolic expansion."""
    k = as_exact(k)
    n_vars = poly.n_vars
    out = Polynomial(n_vars)
    for i in range(n_vars):
        out = out + poly.derivative(i).derivative(i).shift(i, 2)
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            numerator = poly.derivative(i).shift(i, 2) - poly.derivative(j).shift(j, 2)
            out = out + numerator.divide_by_difference(i, j) * (2 * k)
    return out


@lru_cache(maxsize=None)
def _incoming(degree: int, n_vars: int, k: Fraction) -> dict[Partition, list[tuple[Partition, Fraction]]]:
    incoming: dict[Partition, list[tuple[Partition, Fraction]]] = {}
    for mu, row in operator_matrix(degree, n_vars, k).items():
        for lam, coeff in row.items():
            if lam != mu:
                incoming.setdefault(lam, []).append((mu, coeff))
    return incoming


@lru_cache(maxsize=None)
def jack_expansion(tau: Partition, alpha: ExactLike, n_vars: int) -> JackExpansion:
    """The monomial expansion P_tau^(alpha) = sum_{lam <= tau} u_{tau lam} m_lam.

    Args:
        tau (Partition): The indexing partition, l(tau) <= n_vars.
        alpha (ExactLike): The Jack parameter, alpha > 0.
        n_vars (int): The number of variables N.

    Raises:
        NegativeParameterException: alpha <= 0.
        PartitionTooLongException: l(tau) > N.
        DegenerateSpectrumException: E_tau == E_lam for some lam < tau.

    Returns:
        JackExpansion: The row u with u_{tau tau} = 1 and the eigenvalue of D_{1/alpha}.
    """
    alpha = as_exact(alpha)
    if alpha <= 0:
        raise NegativeParameterException("alpha", alpha)
    if tau.length > n_vars:
        raise PartitionTooLongException(tau.length, n_vars)
    k = 1 / alpha
    degree = tau.modulus

    e_tau = stanley_eigenvalue(tau, k, n_vars)
    incoming = _incoming(degree, n_vars, k)
    u: dict[Partition, Fraction] = {tau: Fraction(1)}
    # reverse-lexicographic order refines dominance, so every mu > lam is already solved
    for lam in enumerate_partitions(degree, n_vars):
        if lam.parts >= tau.parts or not dominated_by(lam, tau):
            continue
        total = sum((coeff * u[mu] for mu, coeff in incoming.get(lam, ()) if mu in u), start=Fraction(0))
        if total == 0:
            continue
        gap = e_tau - stanley_eigenvalue(lam, k, n_vars)
        if gap == 0:
            raise DegenerateSpectrumException(tau.parts, lam.parts, alpha, n_vars)
        u[lam] = total / gap
    return JackExpansion(tau, alpha, n_vars, u, e_tau)


def jack_rows(degree: int, alpha: ExactLike, n_vars: int) -> dict[Partition, JackExpansion]:
    alpha = as_exact(alpha)
    return {tau: jack_expansion(tau, alpha, n_vars) for tau in enumerate_partitions(degree, n_vars)}


def jack_c_normalized(tau: Partition, alpha: ExactLike, n_vars: int) -> dict[Partition, Fraction]:
    """Monomial coefficients of C_tau^(alpha)."""
    multiplier = jack_c_from_p(tau, alpha)
    return {lam: multiplier * u for lam, u in jack_expansion(tau, as_exact(alpha), n_vars).u.items()}

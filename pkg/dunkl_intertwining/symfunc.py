"""Symmetric-function bases, hook products and generalized Pochhammer symbols.

Evaluations take float vectors; every quantity indexed only by partitions and
the Jack parameter is an exact Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, prod

import numpy as np

from dunkl_intertwining.exceptions import (
    NegativeParameterException,
    OutOfRangeException,
    PartitionTooLongException,
)
from dunkl_intertwining.partition import Partition, distinct_permutations
from dunkl_intertwining.typing import ExactLike, ExactScalar, VectorLike


def as_exact(value: ExactLike) -> ExactScalar:
    """Exact rational from an int, Fraction, "p/q" string or float.

    Floats go through their shortest decimal repr, so 0.1 becomes 1/10.
    """
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


class Basis(Enum):
    MONOMIAL = "monomial"
    JACK_P = "jack_p"


@dataclass(frozen=True)
class SymPoly:
    """A homogeneous symmetric polynomial in n_vars variables, sparse over a basis."""

    basis: Basis
    degree: int
    n_vars: int
    coefficients: dict[Partition, Fraction] = field(default_factory=dict)
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        for lam in self.coefficients:
            assert lam.modulus == self.degree
            if lam.length > self.n_vars:
                raise PartitionTooLongException(lam.length, self.n_vars)
        object.__setattr__(
            self, "coefficients", {lam: Fraction(c) for lam, c in self.coefficients.items() if c != 0}
        )
        if self.basis is Basis.JACK_P:
            assert self.alpha is not None

    def to_monomial(self) -> SymPoly:
        if self.basis is Basis.MONOMIAL:
            return self
        from dunkl_intertwining.jack import jack_expansion

        assert self.alpha is not None
        out: dict[Partition, Fraction] = {}
        for tau, coeff in self.coefficients.items():
            for lam, u in jack_expansion(tau, self.alpha, self.n_vars).u.items():
                out[lam] = out.get(lam, Fraction(0)) + coeff * u
        return SymPoly(Basis.MONOMIAL, self.degree, self.n_vars, out)

    def evaluate(self, x: VectorLike) -> float:
        mono = self.to_monomial()
        return sum(float(c) * eval_monomial(lam, x) for lam, c in mono.coefficients.items())


def _as_vector(x: VectorLike) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


@lru_cache(maxsize=None)
def monomial_exponents(lam: Partition, n_vars: int) -> np.ndarray:
    """Distinct permutations of the padded parts, one read-only row each."""
    exponents = np.array(list(distinct_permutations(lam.padded(n_vars))), dtype=np.int64)
    exponents.flags.writeable = False
    return exponents


def eval_monomial(lam: Partition, x: VectorLike) -> float:
    """m_lambda(x): sum over the distinct permutations of the padded parts."""
    v = _as_vector(x)
    n_vars = len(v)
    if lam.length > n_vars:
        raise PartitionTooLongException(lam.length, n_vars)
    return float(np.prod(v ** monomial_exponents(lam, n_vars), axis=1).sum())


def eval_elementary(n: int, x: VectorLike) -> float:
    v = _as_vector(x)
    if n < 0 or n > len(v):
        raise OutOfRangeException("n", n, f"[0, {len(v)}]")
    # e_n is the coefficient of z^(N-n) in prod (z + x_i)
    coeffs = np.poly(-v) if len(v) else np.array([1.0])
    return float(coeffs[n])


def eval_elementary_partition(tau: Partition, x: VectorLike) -> float:
    return float(prod(eval_elementary(part, x) for part in tau.parts))


def eval_schur(tau: Partition, x: VectorLike) -> float:
    """s_tau(x) by the bialternant ratio; repeated components use the Kostka row instead."""
    v = _as_vector(x)
    n_vars = len(v)
    if tau.length > n_vars:
        raise PartitionTooLongException(tau.length, n_vars)
    if not tau.parts:
        return 1.0
    if len(np.unique(v)) < n_vars:
        from dunkl_intertwining.jack import jack_expansion

        row = jack_expansion(tau, Fraction(1), n_vars).u
        return sum(float(u) * eval_monomial(lam, v) for lam, u in row.items())

    rows = np.arange(n_vars)
    numerator = v[None, :] ** (np.array(tau.padded(n_vars))[:, None] + n_vars - 1 - rows[:, None])
    denominator = v[None, :] ** (n_vars - 1 - rows[:, None])
    return float(np.linalg.det(numerator) / np.linalg.det(denominator))


def pochhammer_general(a: ExactLike, tau: Partition, alpha: ExactLike) -> ExactScalar:
    """(a)_tau^(alpha) as the finite product prod_i prod_m (a - (i-1)/alpha + m)."""
    a, alpha = as_exact(a), as_exact(alpha)
    if alpha <= 0:
        raise NegativeParameterException("alpha", alpha)
    result = Fraction(1)
    for i, part in enumerate(tau.parts):
        base = a - Fraction(i) / alpha
        for m in range(part):
            result *= base + m
    return result


def hook_products(tau: Partition, alpha: ExactLike) -> tuple[ExactScalar, ExactScalar]:
    """The upper and lower hook products (c_tau(alpha), c'_tau(alpha))."""
    alpha = as_exact(alpha)
    if alpha <= 0:
        raise NegativeParameterException("alpha", alpha)
    conj = tau.conjugate
    c, c_prime = Fraction(1), Fraction(1)
    for i, j in tau.cells():
        arm = tau[i - 1] - j
        leg = conj[j - 1] - i
        c *= alpha * arm + leg + 1
        c_prime *= alpha * (arm + 1) + leg
    return c, c_prime


def jack_c_from_p(tau: Partition, alpha: ExactLike) -> ExactScalar:
    """Multiplier turning P_tau into C_tau: alpha^|tau| |tau|! / c'_tau(alpha)."""
    alpha = as_exact(alpha)
    _, c_prime = hook_products(tau, alpha)
    return alpha**tau.modulus * factorial(tau.modulus) / c_prime


def jack_at_ones(tau: Partition, alpha: ExactLike, n_vars: int) -> ExactScalar:
    """P_tau^(alpha)(1, ..., 1) = alpha^|tau| (N/alpha)_tau / c_tau(alpha)."""
    alpha = as_exact(alpha)
    if tau.length > n_vars:
        raise PartitionTooLongException(tau.length, n_vars)
    c, _ = hook_products(tau, alpha)
    return alpha**tau.modulus * pochhammer_general(Fraction(n_vars) / alpha, tau, alpha) / c


def elementary_in_monomials(tau: Partition, n_vars: int) -> dict[Partition, Fraction]:
    """e_tau expanded in monomial symmetric functions, by brute-force multiplication."""
    from dunkl_intertwining.polynomial import Polynomial

    product = Polynomial.constant(n_vars, 1)
    for part in tau.parts:
        if part > n_vars:
            raise OutOfRangeException("part", part, f"[0, {n_vars}]")
        e_n = Polynomial(
            n_vars,
            {tuple(1 if i in subset else 0 for i in range(n_vars)): 1 for subset in combinations(range(n_vars), part)},
        )
        product = product * e_n
    return product.to_monomial_basis()


def vandermonde(x: VectorLike) -> float:
    """h_N(x) = prod_{i<j} (x_j - x_i)."""
    v = _as_vector(x)
    diffs = v[None, :] - v[:, None]
    return float(np.prod(diffs[np.triu_indices(len(v), k=1)]))


def log_abs_vandermonde(x: VectorLike) -> float:
    """log |h_N(x)|; -inf when two components coincide."""
    v = _as_vector(x)
    diffs = np.abs(v[None, :] - v[:, None])[np.triu_indices(len(v), k=1)]
    if np.any(diffs == 0):
        return float("-inf")
    return float(np.sum(np.log(diffs)))

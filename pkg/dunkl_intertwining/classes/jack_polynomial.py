from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from dunkl_intertwining.exceptions import OutOfRangeException
from dunkl_intertwining.jack import JackExpansion, apply_operator, jack_c_normalized, jack_expansion
from dunkl_intertwining.partition import Partition
from dunkl_intertwining.polynomial import Polynomial
from dunkl_intertwining.symfunc import Basis, SymPoly, as_exact, jack_at_ones
from dunkl_intertwining.typing import ExactLike, ExactScalar, VectorLike


class JackPolynomial:
    """The Jack polynomial P_tau^(alpha) in n_vars variables."""

    tau: Partition
    alpha: ExactScalar
    n_vars: int

    def __init__(self, tau: Partition, alpha: ExactLike, n_vars: int) -> None:
        self.tau = tau
        self.alpha = as_exact(alpha)
        self.n_vars = n_vars

    @cached_property
    def expansion(self) -> JackExpansion:
        return jack_expansion(self.tau, self.alpha, self.n_vars)

    @property
    def coefficients(self) -> dict[Partition, Fraction]:
        return self.expansion.u

    @property
    def eigenvalue(self) -> ExactScalar:
        return self.expansion.eigenvalue

    @cached_property
    def polynomial(self) -> Polynomial:
        return self.expansion.polynomial()

    @cached_property
    def c_normalized(self) -> dict[Partition, Fraction]:
        return jack_c_normalized(self.tau, self.alpha, self.n_vars)

    @property
    def value_at_ones(self) -> ExactScalar:
        return jack_at_ones(self.tau, self.alpha, self.n_vars)

    def as_sympoly(self) -> SymPoly:
        return SymPoly(Basis.JACK_P, self.tau.modulus, self.n_vars, {self.tau: Fraction(1)}, self.alpha)

    def evaluate(self, x: VectorLike) -> float:
        if len(x) != self.n_vars:
            raise OutOfRangeException("len(x)", len(x), f"N = {self.n_vars}")
        return self.as_sympoly().evaluate(x)

    def eigenrelation_residual(self) -> Polynomial:
        """D_{1/alpha} P - E P, identically zero for a correct expansion."""
        return apply_operator(self.polynomial, 1 / self.alpha) - self.polynomial * self.eigenvalue

"""Exact sparse multivariate polynomials over the rationals.

A thin layer over sympy's sparse polynomial rings QQ[x0, ..., x_{N-1}]. Coefficients
cross the boundary as Fraction; zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from sympy import QQ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from dunkl_intertwining.exceptions import NonPolynomialResultException
from dunkl_intertwining.partition import Partition, distinct_permutations
from dunkl_intertwining.typing import ExactLike, Exponent


@lru_cache(maxsize=None)
def polynomial_ring(n_vars: int) -> PolyRing:
    return ring([f"x{i}" for i in range(n_vars)], QQ)[0]


def to_qq(value: ExactLike) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value: object) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class Polynomial:
    n_vars: int
    element: PolyElement

    def __init__(self, n_vars: int, terms: Mapping[Exponent, ExactLike] | None = None) -> None:
        self.n_vars = n_vars
        coefficients = {}
        for exponent, coeff in (terms or {}).items():
            assert len(exponent) == n_vars
            coefficients[tuple(int(e) for e in exponent)] = to_qq(coeff)
        self.element = polynomial_ring(n_vars).from_dict(coefficients)

    @classmethod
    def wrap(cls, n_vars: int, element: PolyElement) -> Polynomial:
        poly = cls.__new__(cls)
        poly.n_vars = n_vars
        poly.element = element
        return poly

    @classmethod
    def constant(cls, n_vars: int, value: ExactLike) -> Polynomial:
        return cls(n_vars, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, n_vars: int, index: int) -> Polynomial:
        return cls.wrap(n_vars, polynomial_ring(n_vars).gens[index])

    @classmethod
    def monomial_symmetric(cls, lam: Partition, n_vars: int) -> Polynomial:
        """m_lambda: one unit term per distinct permutation of the padded parts."""
        return cls(n_vars, {perm: 1 for perm in distinct_permutations(lam.padded(n_vars))})

    @classmethod
    def from_monomial_basis(cls, coefficients: Mapping[Partition, ExactLike], n_vars: int) -> Polynomial:
        # distinct partitions have disjoint permutation orbits
        return cls(
            n_vars,
            {perm: coeff for lam, coeff in coefficients.items() for perm in distinct_permutations(lam.padded(n_vars))},
        )

    @property
    def ring(self) -> PolyRing:
        return self.element.ring

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return {exponent: from_qq(coeff) for exponent, coeff in self.element.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.element == other.element

    def __repr__(self) -> str:
        return f"Polynomial({self.n_vars}, {self.element})"

    def __bool__(self) -> bool:
        return bool(self.element)

    def __add__(self, other: Polynomial) -> Polynomial:
        assert self.n_vars == other.n_vars
        return Polynomial.wrap(self.n_vars, self.element + other.element)

    def __neg__(self) -> Polynomial:
        return Polynomial.wrap(self.n_vars, -self.element)

    def __sub__(self, other: Polynomial) -> Polynomial:
        assert self.n_vars == other.n_vars
        return Polynomial.wrap(self.n_vars, self.element - other.element)

    def __mul__(self, other: Polynomial | ExactLike) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial.wrap(self.n_vars, self.element.mul_ground(to_qq(other)))
        assert self.n_vars == other.n_vars
        return Polynomial.wrap(self.n_vars, self.element * other.element)

    __rmul__ = __mul__

    @property
    def degrees(self) -> set[int]:
        return {sum(e) for e in self.element.itermonoms()}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degrees = self.degrees
        if not degrees:
            return True
        return len(degrees) == 1 and (degree is None or degrees == {degree})

    def derivative(self, index: int) -> Polynomial:
        return Polynomial.wrap(self.n_vars, self.element.diff(index))

    def shift(self, index: int, power: int) -> Polynomial:
        """Multiply by x_index ** power."""
        monomial = tuple(power if i == index else 0 for i in range(self.n_vars))
        return Polynomial.wrap(self.n_vars, self.element.mul_monom(monomial))

    def swap(self, i: int, j: int) -> Polynomial:
        """f(sigma_ij x): exchange the roles of x_i and x_j."""
        order = list(range(self.n_vars))
        order[i], order[j] = j, i
        swapped = {tuple(exponent[k] for k in order): coeff for exponent, coeff in self.element.items()}
        return Polynomial.wrap(self.n_vars, self.ring.from_dict(swapped))

    def divide_by_difference(self, i: int, j: int) -> Polynomial:
        """Exact quotient by (x_i - x_j).

        Raises:
            NonPolynomialResultException: the division leaves a remainder.
        """
        gens = self.ring.gens
        try:
            quotient = self.element.exquo(gens[i] - gens[j])
        except ExactQuotientFailed as exc:
            leading = self.element.leading_expv() if self.element else (0,) * self.n_vars
            raise NonPolynomialResultException((i, j), tuple(leading)) from exc
        return Polynomial.wrap(self.n_vars, quotient)

    def to_monomial_basis(self, check: bool = True) -> dict[Partition, Fraction]:
        """Coefficients in the monomial symmetric basis, read off at sorted exponents.

        With check=True the polynomial is verified to be symmetric.
        """
        result: dict[Partition, Fraction] = {}
        for exponent, coeff in self.terms.items():
            if list(exponent) == sorted(exponent, reverse=True):
                result[Partition(exponent)] = coeff
        if check and Polynomial.from_monomial_basis(result, self.n_vars) != self:
            raise ValueError("polynomial is not symmetric")
        return result

    def evaluate(self, point: Iterable[ExactLike]) -> Fraction | float:
        """Exact at rational points, floating point once any coordinate is a float."""
        values = list(point)
        assert len(values) == self.n_vars
        if all(isinstance(v, (int, Fraction)) for v in values):
            return from_qq(self.element(*(to_qq(v) for v in values)))
        total = 0.0
        for exponent, coeff in self.terms.items():
            term = float(coeff)
            for value, power in zip(values, exponent):
                if power:
                    term *= float(value) ** power
            total += term
        return total

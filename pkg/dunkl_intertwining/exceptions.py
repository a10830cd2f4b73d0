from fractions import Fraction


class DunklException(Exception):
    pass


class DomainException(DunklException):
    pass


class PartitionException(DomainException):
    """The parts do not form a weakly decreasing sequence of positive integers."""

    parts: tuple

    def __init__(self, parts: tuple, reason: str = "invalid partition") -> None:
        self.parts = parts
        super().__init__(f"{reason}: {parts}")


class ModulusMismatchException(DomainException):
    left: int
    right: int

    def __init__(self, left: int, right: int) -> None:
        self.left = left
        self.right = right
        super().__init__(f"partitions of different modulus: {left} != {right}")


class PartitionTooLongException(DomainException):
    length: int
    n_vars: int

    def __init__(self, length: int, n_vars: int) -> None:
        self.length = length
        self.n_vars = n_vars
        super().__init__(f"partition of length {length} needs more than N={n_vars} variables")


class NegativeParameterException(DomainException):
    name: str
    value: object

    def __init__(self, name: str, value: object) -> None:
        self.name = name
        self.value = value
        super().__init__(f"{name} must be positive, got {value}")


class UnorderedInputException(DomainException):
    """Vectors must be strictly increasing for the ordered-chamber formulas."""

    values: tuple[float, ...]

    def __init__(self, values) -> None:
        self.values = tuple(float(v) for v in values)
        super().__init__(f"expected strictly increasing components, got {self.values}")


class CoincidentPointsException(DomainException):
    values: tuple[float, ...]

    def __init__(self, values) -> None:
        self.values = tuple(float(v) for v in values)
        super().__init__(f"coincident components in {self.values}")


class UnsupportedCaseException(DomainException):
    pass


class OutOfRangeException(DomainException):
    name: str
    value: object

    def __init__(self, name: str, value: object, allowed: str) -> None:
        self.name = name
        self.value = value
        super().__init__(f"{name}={value} outside {allowed}")


class NumericException(DunklException):
    pass


class DegenerateSpectrumException(NumericException):
    """Two eigenvalues of the Jack eigenoperator coincide within a degree."""

    tau: tuple[int, ...]
    lam: tuple[int, ...]
    alpha: Fraction
    n_vars: int

    def __init__(self, tau, lam, alpha: Fraction, n_vars: int) -> None:
        self.tau = tuple(tau)
        self.lam = tuple(lam)
        self.alpha = alpha
        self.n_vars = n_vars
        super().__init__(
            f"E_tau == E_lambda for tau={self.tau}, lambda={self.lam}, alpha={alpha}, N={n_vars}"
        )


class NonPolynomialResultException(NumericException):
    """An exact division by (x_i - x_j) left a remainder."""

    pair: tuple[int, int]
    exponent: tuple[int, ...]

    def __init__(self, pair: tuple[int, int], exponent: tuple[int, ...]) -> None:
        self.pair = pair
        self.exponent = exponent
        super().__init__(f"numerator not divisible by x_{pair[0]} - x_{pair[1]} at monomial {exponent}")


class SeriesNotConvergedException(NumericException):
    degree: int
    last_layer: float

    def __init__(self, degree: int, last_layer: float, tol: float) -> None:
        self.degree = degree
        self.last_layer = last_layer
        super().__init__(
            f"series not converged at degree cap {degree} (last layer {last_layer:.3e}, tol {tol:.1e})"
        )


class IntegratorException(NumericException):
    pass

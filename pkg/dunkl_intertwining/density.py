"""The generalized hypergeometric series 0F0, the symmetrized Dunkl kernel and the
closed-form transition probability densities built from them.

Everything here is double precision; the Jack rows and weights feeding the series
come from the exact layer and are converted to floats once per degree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, log

import numpy as np
from scipy.special import gammaln

from dunkl_intertwining.exceptions import (
    CoincidentPointsException,
    NegativeParameterException,
    OutOfRangeException,
    SeriesNotConvergedException,
    UnorderedInputException,
    UnsupportedCaseException,
)
from dunkl_intertwining.intertwine import jack_weight
from dunkl_intertwining.jack import jack_expansion
from dunkl_intertwining.partition import Partition, enumerate_partitions
from dunkl_intertwining.symfunc import as_exact, eval_monomial, log_abs_vandermonde, vandermonde
from dunkl_intertwining.typing import ExactLike, ExactScalar, Vector, VectorLike

logger = logging.getLogger(__name__)

LOG_2PI = log(2 * np.pi)


@dataclass(frozen=True)
class SeriesControls:
    """Truncation of the 0F0 series.

    Summation stops once two consecutive degree layers are both below
    tol * |partial sum|. Layers can vanish without the tail vanishing: odd layers
    are exactly zero for arguments like (-a, a), and the first layer is only
    rounding noise once sum(x) is zero in floating point.
    """

    n_max: int = 40
    tol: float = 1e-12
    strict: bool = True

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise OutOfRangeException("n_max", self.n_max, "[1, inf)")
        if not 0 < self.tol < 1:
            raise OutOfRangeException("tol", self.tol, "(0, 1)")


@dataclass(frozen=True)
class SeriesResult:
    value: float
    degree: int
    last_layer: float
    converged: bool


def _as_vector(x: VectorLike) -> Vector:
    return np.asarray(x, dtype=np.float64)


def ordered(x: VectorLike) -> Vector:
    """Sorted copy of x; ties are rejected since the chamber formulas need strict order."""
    v = np.sort(_as_vector(x))
    if np.any(np.diff(v) == 0):
        raise CoincidentPointsException(v)
    return v


def require_strictly_increasing(v: Vector) -> None:
    gaps = np.diff(v)
    if np.any(gaps == 0):
        raise CoincidentPointsException(v)
    if np.any(gaps < 0):
        raise UnorderedInputException(v)


@dataclass(frozen=True, eq=False)
class TpdQuery:
    """A density query p(t, y | x) with strictly increasing x and y and beta = 2k."""

    t: float
    x: Vector
    y: Vector
    beta: float
    controls: SeriesControls = field(default_factory=SeriesControls)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _as_vector(self.x))
        object.__setattr__(self, "y", _as_vector(self.y))
        if self.t <= 0:
            raise NegativeParameterException("t", self.t)
        if self.beta <= 0:
            raise NegativeParameterException("beta", self.beta)
        if self.x.shape != self.y.shape or self.x.ndim != 1 or len(self.x) == 0:
            raise OutOfRangeException("len(y)", len(self.y), f"len(x) = {len(self.x)}")
        require_strictly_increasing(self.x)
        require_strictly_increasing(self.y)

    @classmethod
    def with_k(cls, t: float, x: VectorLike, y: VectorLike, k: float, controls: SeriesControls | None = None) -> TpdQuery:
        return cls(t, x, y, 2 * k, controls or SeriesControls())

    @property
    def k(self) -> float:
        return self.beta / 2

    @property
    def n_vars(self) -> int:
        return len(self.x)


@lru_cache(maxsize=None)
def _layer_tables(degree: int, k: Fraction, n_vars: int) -> tuple[list[Partition], Vector, np.ndarray]:
    """Partitions of the degree, float Jack weights per tau and the float u-matrix [tau, lam]."""
    alpha = 1 / k
    partitions = enumerate_partitions(degree, n_vars)
    index = {lam: i for i, lam in enumerate(partitions)}
    weights = np.array([float(jack_weight(tau, k, n_vars)) for tau in partitions])
    u = np.zeros((len(partitions), len(partitions)))
    for row, tau in enumerate(partitions):
        for lam, coeff in jack_expansion(tau, alpha, n_vars).u.items():
            u[row, index[lam]] = float(coeff)
    logger.debug("series layer %d ready for k=%s, N=%d (%d partitions)", degree, k, n_vars, len(partitions))
    return partitions, weights, u


def _monomial_values(partitions: list[Partition], v: Vector) -> Vector:
    return np.array([eval_monomial(lam, v) for lam in partitions])


def hypergeom_00(x: VectorLike, y: VectorLike, k: ExactLike, controls: SeriesControls | None = None) -> SeriesResult:
    """0F0 with Jack parameter 1/k, summed degree by degree.

    Args:
        x (VectorLike): First argument, length N.
        y (VectorLike): Second argument, length N.
        k (ExactLike): Multiplicity parameter, k > 0; floats are taken at their decimal value.
        controls (SeriesControls | None, optional): Truncation settings. Defaults to SeriesControls().

    Raises:
        NegativeParameterException: k <= 0.
        SeriesNotConvergedException: n_max reached with controls.strict set.

    Returns:
        SeriesResult: The partial sum with the degree reached and the size of the last layer.
    """
    controls = controls or SeriesControls()
    xv, yv = _as_vector(x), _as_vector(y)
    if xv.shape != yv.shape:
        raise OutOfRangeException("len(y)", len(yv), f"len(x) = {len(xv)}")
    k = as_exact(k)
    if k <= 0:
        raise NegativeParameterException("k", k)
    n_vars = len(xv)

    total = 1.0
    small_layers = 0
    layer = 1.0
    degree = 0
    for degree in range(1, controls.n_max + 1):
        partitions, weights, u = _layer_tables(degree, k, n_vars)
        jack_x = u @ _monomial_values(partitions, xv)
        jack_y = u @ _monomial_values(partitions, yv)
        layer = float(np.sum(weights * jack_x * jack_y))
        total += layer
        small_layers = small_layers + 1 if abs(layer) < controls.tol * abs(total) else 0
        if small_layers == 2:
            logger.debug("0F0 converged at degree %d (last layer %.3e)", degree, layer)
            return SeriesResult(total, degree, abs(layer), True)

    if controls.strict:
        raise SeriesNotConvergedException(degree, abs(layer), controls.tol)
    logger.warning("0F0 not converged at degree %d, last layer %.3e", degree, abs(layer))
    return SeriesResult(total, degree, abs(layer), False)


def symmetrized_kernel(x: VectorLike, y: VectorLike, k: ExactLike, controls: SeriesControls | None = None) -> SeriesResult:
    """sum_rho E_k(rho x, y) = N! 0F0^(1/k)(x, y)."""
    series = hypergeom_00(x, y, k, controls)
    scale = factorial(len(_as_vector(x)))
    return SeriesResult(scale * series.value, series.degree, scale * series.last_layer, series.converged)


def symmetrized_kernel_limit(x: VectorLike, y: VectorLike) -> float:
    """The k -> infinity limit N! exp((x.1)(y.1)/N)."""
    xv, yv = _as_vector(x), _as_vector(y)
    n_vars = len(xv)
    return float(factorial(n_vars) * np.exp(np.sum(xv) * np.sum(yv) / n_vars))


def dyson_tpd_series(q: TpdQuery) -> SeriesResult:
    """Transition density of Dyson's model on the ordered chamber, through the 0F0 series."""
    n_vars, t, beta = q.n_vars, q.t, q.beta
    sqrt_t = np.sqrt(t)
    j = np.arange(1, n_vars + 1)
    log_prefactor = (
        log(factorial(n_vars))
        - (q.x @ q.x + q.y @ q.y) / (2 * t)
        - n_vars / 2 * (LOG_2PI + log(t))
        + float(np.sum(gammaln(1 + beta / 2) - gammaln(1 + j * beta / 2)))
        + beta * log_abs_vandermonde(q.y / sqrt_t)
    )
    series = hypergeom_00(q.x / sqrt_t, q.y / sqrt_t, q.k, q.controls)
    scale = float(np.exp(log_prefactor))
    return SeriesResult(scale * series.value, series.degree, scale * series.last_layer, series.converged)


def _gaussian(d: np.ndarray, t: float) -> np.ndarray:
    return np.exp(-(d**2) / (2 * t)) / np.sqrt(2 * np.pi * t)


def grabiner_tpd(q: TpdQuery) -> float:
    """The beta = 2 density [h_N(y)/h_N(x)] det[g_t(x_i - y_j)].

    Raises:
        UnsupportedCaseException: beta != 2.
    """
    if q.beta != 2:
        raise UnsupportedCaseException(f"the determinantal density needs beta=2, got {q.beta}")
    kernel = _gaussian(q.x[:, None] - q.y[None, :], q.t)
    return vandermonde(q.y) / vandermonde(q.x) * float(np.linalg.det(kernel))


@dataclass(frozen=True)
class WeightNorm:
    n_vars: int
    k: ExactScalar
    gamma: ExactScalar
    log_c_k: float

    @property
    def c_k(self) -> float:
        return float(np.exp(self.log_c_k))

    def log_weight(self, x: VectorLike) -> float:
        return 2 * float(self.k) * log_abs_vandermonde(x) - float(self.gamma) * log(2)

    def weight(self, x: VectorLike) -> float:
        """w_k(x) = |h_N(x)|^(2k) / 2^gamma."""
        return float(np.exp(self.log_weight(x)))


def weight_norm(n_vars: int, k: ExactLike) -> WeightNorm:
    """The type-A weight and its Gaussian normalization c_k from the Selberg integral."""
    k = as_exact(k)
    if k < 0:
        raise NegativeParameterException("k", k)
    if n_vars < 1:
        raise OutOfRangeException("N", n_vars, "[1, inf)")
    gamma = k * n_vars * (n_vars - 1) / 2
    j = np.arange(1, n_vars + 1)
    kf = float(k)
    log_c_k = n_vars / 2 * LOG_2PI - float(gamma) * log(2) + float(np.sum(gammaln(1 + j * kf) - gammaln(1 + kf)))
    return WeightNorm(n_vars, k, gamma, log_c_k)


def dunkl_tpd_symmetric(q: TpdQuery) -> SeriesResult:
    """p_k^s(t, y | x) as w_k(y/sqrt t) / (c_k t^(N/2)) e^(-(x^2+y^2)/2t) times the symmetrized kernel."""
    n_vars, t = q.n_vars, q.t
    sqrt_t = np.sqrt(t)
    norm = weight_norm(n_vars, q.k)
    log_prefactor = (
        norm.log_weight(q.y / sqrt_t) - norm.log_c_k - n_vars / 2 * log(t) - (q.x @ q.x + q.y @ q.y) / (2 * t)
    )
    kernel = symmetrized_kernel(q.x / sqrt_t, q.y / sqrt_t, q.k, q.controls)
    scale = float(np.exp(log_prefactor))
    return SeriesResult(scale * kernel.value, kernel.degree, scale * kernel.last_layer, kernel.converged)


def brownian_tpd(t: float, y: VectorLike, x: VectorLike) -> float:
    """Free N-dimensional heat kernel."""
    if t <= 0:
        raise NegativeParameterException("t", t)
    return float(np.prod(_gaussian(_as_vector(y) - _as_vector(x), t)))


def symmetrized_brownian_tpd(t: float, y: VectorLike, x: VectorLike) -> float:
    """sum over permutations rho of the heat kernel from rho x; the beta -> 0 limit of the Dyson density."""
    xv = _as_vector(x)
    return sum(brownian_tpd(t, y, xv[list(rho)]) for rho in permutations(range(len(xv))))

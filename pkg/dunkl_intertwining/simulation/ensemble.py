from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Callable

import numpy as np
from scipy.stats import ks_2samp, kstest, norm

from dunkl_intertwining.density import require_strictly_increasing
from dunkl_intertwining.exceptions import NegativeParameterException, OutOfRangeException, UnsupportedCaseException
from dunkl_intertwining.simulation.simulation_exceptions import GridMismatchException
from dunkl_intertwining.simulation.simulation_typing import Ensemble
from dunkl_intertwining.typing import Matrix, Vector, VectorLike

logger = logging.getLogger(__name__)

MAX_MARGINAL_N = 3
DEFAULT_NODES = {2: 1201, 3: 161}


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Moments of the sorted positions over trajectories, one row per recorded time."""

    times: Vector
    mean: Matrix
    variance: Matrix
    third_moment: Matrix
    final_sorted: Matrix
    center_shift_mean: float
    center_shift_stderr: float


def ensemble_stats(e: Ensemble) -> EnsembleStats:
    sorted_positions = e.sorted_positions
    mean = sorted_positions.mean(axis=0)
    centered = sorted_positions - mean
    ddof = 1 if e.n_traj > 1 else 0
    shift = sorted_positions[:, -1, :].sum(axis=1) - sorted_positions[:, 0, :].sum(axis=1)
    return EnsembleStats(
        times=e.times,
        mean=mean,
        variance=sorted_positions.var(axis=0, ddof=ddof),
        third_moment=(centered**3).mean(axis=0),
        final_sorted=sorted_positions[:, -1, :],
        center_shift_mean=float(shift.mean()),
        center_shift_stderr=float(shift.std(ddof=ddof) / np.sqrt(e.n_traj)),
    )


def empirical_cdf(samples: VectorLike, grid: VectorLike) -> Vector:
    ordered_samples = np.sort(np.asarray(samples, dtype=np.float64))
    return np.searchsorted(ordered_samples, np.asarray(grid, dtype=np.float64), side="right") / len(ordered_samples)


def _check_grids(a: Ensemble, b: Ensemble) -> None:
    if a.n_vars != b.n_vars or not np.array_equal(a.times, b.times):
        raise GridMismatchException(
            f"ensembles differ in grid: N={a.n_vars} vs {b.n_vars}, {len(a.times)} vs {len(b.times)} times"
        )


def ks_distance(a: Ensemble, b: Ensemble, time_index: int = -1) -> Vector:
    """Two-sample KS statistic per sorted coordinate at one recorded time.

    Raises:
        GridMismatchException: The ensembles have different N or time grids.
    """
    _check_grids(a, b)
    left = a.sorted_positions[:, time_index, :]
    right = b.sorted_positions[:, time_index, :]
    return np.array([ks_2samp(left[:, i], right[:, i]).statistic for i in range(a.n_vars)])


def ks_against(samples: VectorLike, cdf: Callable[[Vector], Vector]) -> float:
    return float(kstest(np.asarray(samples, dtype=np.float64), cdf).statistic)


def ks_critical_value(n_left: int, n_right: int, coefficient: float = 1.63) -> float:
    """Asymptotic two-sample KS critical value; 1.63 is the 1% level."""
    return coefficient * np.sqrt((n_left + n_right) / (n_left * n_right))


@lru_cache(maxsize=32)
def _marginal_table(x0: tuple[float, ...], t: float, n_nodes: int) -> tuple[Vector, Matrix]:
    """Node grid and normalized marginal CDFs of every sorted coordinate at beta = 2."""
    x = np.array(x0)
    n_vars = len(x)
    half_width = 8 * np.sqrt(t)
    nodes = np.linspace(x[0] - half_width, x[-1] + half_width, n_nodes)
    cell = nodes[1] - nodes[0]
    kernel = np.exp(-((x[:, None] - nodes[None, :]) ** 2) / (2 * t)) / np.sqrt(2 * np.pi * t)

    # det[g(x_i - y_j)] as a signed sum of outer products over permutations
    determinant = np.zeros((n_nodes,) * n_vars)
    for rho in permutations(range(n_vars)):
        sign = np.linalg.det(np.eye(n_vars)[list(rho)])
        term = kernel[rho[0]]
        for j in range(1, n_vars):
            term = np.multiply.outer(term, kernel[rho[j]])
        determinant += sign * term

    axes = np.meshgrid(*([nodes] * n_vars), indexing="ij", sparse=True)
    vandermonde_y = np.ones_like(determinant)
    chamber = np.ones(determinant.shape, dtype=bool)
    for i in range(n_vars - 1):
        chamber = chamber & (axes[i] < axes[i + 1])
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            vandermonde_y = vandermonde_y * (axes[j] - axes[i])
    vandermonde_x = np.prod([x[j] - x[i] for i in range(n_vars) for j in range(i + 1, n_vars)])
    density = np.where(chamber, vandermonde_y / vandermonde_x * determinant, 0.0)

    mass = density.sum() * cell**n_vars
    logger.debug("beta=2 marginal table: N=%d, %d nodes, mass %.8f", n_vars, n_nodes, mass)
    cdfs = np.empty((n_vars, n_nodes))
    for c in range(n_vars):
        others = tuple(a for a in range(n_vars) if a != c)
        marginal = density.sum(axis=others)
        cdf = np.cumsum(marginal)
        cdfs[c] = cdf / cdf[-1]
    return nodes, cdfs


def grabiner_marginal_cdf(
    x0: VectorLike, t: float, coordinate: int, grid: VectorLike, n_nodes: int | None = None
) -> Vector:
    """CDF of the sorted coordinate `coordinate` (0-based) of Dyson's model at beta = 2.

    Args:
        x0 (VectorLike): Strictly increasing start, N <= 3.
        t (float): Time, t > 0.
        coordinate (int): Index into the sorted configuration.
        grid (VectorLike): Points where the CDF is wanted.
        n_nodes (int | None, optional): Quadrature nodes per axis. Defaults to 1201 (N=2) or 161 (N=3).

    Raises:
        UnsupportedCaseException: N > 3.

    Returns:
        Vector: CDF values at grid, by tensor-grid quadrature of the determinantal density.
    """
    x = np.asarray(x0, dtype=np.float64)
    require_strictly_increasing(x)
    n_vars = len(x)
    if t <= 0:
        raise NegativeParameterException("t", t)
    if n_vars > MAX_MARGINAL_N:
        raise UnsupportedCaseException(f"marginal quadrature is limited to N <= {MAX_MARGINAL_N}, got {n_vars}")
    if not 0 <= coordinate < n_vars:
        raise OutOfRangeException("coordinate", coordinate, f"[0, {n_vars - 1}]")
    grid = np.asarray(grid, dtype=np.float64)
    if n_vars == 1:
        return norm.cdf(grid, loc=x[0], scale=np.sqrt(t))
    nodes, cdfs = _marginal_table(tuple(x), float(t), n_nodes or DEFAULT_NODES[n_vars])
    return np.interp(grid, nodes, cdfs[coordinate], left=0.0, right=1.0)

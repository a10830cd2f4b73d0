"""Roots of the physicists' Hermite polynomials and the strong-coupling (freezing) analysis.

F_N(v, t) is the exponent of the rescaled density at large k; its maximum value
zero is attained exactly at sqrt(2t) times a permutation of the Hermite roots.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, log

import numpy as np
from scipy.integrate import RK45
from scipy.linalg import eigh_tridiagonal

from dunkl_intertwining.exceptions import (
    CoincidentPointsException,
    IntegratorException,
    NegativeParameterException,
    OutOfRangeException,
    UnorderedInputException,
)
from dunkl_intertwining.symfunc import log_abs_vandermonde
from dunkl_intertwining.typing import Matrix, Vector, VectorLike

logger = logging.getLogger(__name__)

MAX_N = 50


@dataclass(frozen=True, eq=False)
class HermiteRoots:
    n_vars: int
    roots: Vector


def hermite_value(n: int, x: float | Vector) -> tuple[float | Vector, float | Vector]:
    """(H_n(x), H_n'(x)) by the three-term recurrence H_{m+1} = 2x H_m - 2m H_{m-1}."""
    previous, current = np.zeros_like(x, dtype=np.float64), np.ones_like(x, dtype=np.float64)
    for m in range(n):
        previous, current = current, 2 * x * current - 2 * m * previous
    return current, 2 * n * previous


@lru_cache(maxsize=None)
def hermite_roots(n_vars: int) -> HermiteRoots:
    """The N real roots of H_N, ascending.

    Eigenvalues of the Jacobi matrix with off-diagonal sqrt(i/2), followed by one
    Newton step on the recurrence and exact symmetrization about zero.

    Raises:
        OutOfRangeException: N outside [1, 50].
    """
    if not 1 <= n_vars <= MAX_N:
        raise OutOfRangeException("N", n_vars, f"[1, {MAX_N}]")
    if n_vars == 1:
        z = np.zeros(1)
    else:
        off_diagonal = np.sqrt(np.arange(1, n_vars) / 2)
        z = eigh_tridiagonal(np.zeros(n_vars), off_diagonal, eigvals_only=True)
        value, slope = hermite_value(n_vars, z)
        z = np.sort(z - value / slope)
        z = (z - z[::-1]) / 2
    z.setflags(write=False)
    return HermiteRoots(n_vars, z)


@dataclass(frozen=True)
class RootIdentities:
    n_vars: int
    root_sum: float
    sum_sq: float
    sum_sq_reference: float
    log_discriminant: float
    log_discriminant_reference: float
    fixed_point_residual: float


def root_identities(n_vars: int) -> RootIdentities:
    z = hermite_roots(n_vars).roots
    j = np.arange(1, n_vars + 1)
    pair_count = n_vars * (n_vars - 1) / 2
    residual = z - _pair_field(z) if n_vars > 1 else z
    return RootIdentities(
        n_vars=n_vars,
        root_sum=float(np.sum(z)),
        sum_sq=float(z @ z),
        sum_sq_reference=pair_count,
        log_discriminant=2 * log_abs_vandermonde(z),
        log_discriminant_reference=float(np.sum(j * np.log(j))) - pair_count * log(2),
        fixed_point_residual=float(np.max(np.abs(residual))),
    )


def _pair_differences(v: Vector) -> Matrix:
    """d[i, j] = v_i - v_j with ones on the diagonal."""
    d = v[:, None] - v[None, :]
    np.fill_diagonal(d, 1.0)
    return d


def _pair_field(v: Vector) -> Vector:
    """sum_{j != i} 1 / (v_i - v_j)."""
    inverse = 1 / _pair_differences(v)
    np.fill_diagonal(inverse, 0.0)
    return inverse.sum(axis=1)


def _check_time(t: float) -> None:
    if t <= 0:
        raise NegativeParameterException("t", t)


def _check_distinct(v: Vector) -> None:
    if len(np.unique(v)) < len(v):
        raise CoincidentPointsException(v)


def freeze_eval(v: VectorLike, t: float) -> float:
    """F_N(v, t); -inf when two components coincide."""
    _check_time(t)
    v = np.asarray(v, dtype=np.float64)
    n_vars = len(v)
    log_h = log_abs_vandermonde(v)
    if log_h == float("-inf"):
        return log_h
    j = np.arange(1, n_vars + 1)
    return float(
        n_vars * (n_vars - 1) / 2 * (1 - log(t)) - np.sum(j * np.log(j)) + 2 * log_h - v @ v / (2 * t)
    )


def freeze_grad(v: VectorLike, t: float) -> Vector:
    _check_time(t)
    v = np.asarray(v, dtype=np.float64)
    _check_distinct(v)
    return 2 * _pair_field(v) - v / t


def freeze_hess(v: VectorLike, t: float) -> Matrix:
    """Off-diagonal 2/(v_i - v_l)^2, diagonal -sum_{j != i} 2/(v_i - v_j)^2 - 1/t."""
    _check_time(t)
    v = np.asarray(v, dtype=np.float64)
    _check_distinct(v)
    coupling = 2 / _pair_differences(v) ** 2
    np.fill_diagonal(coupling, 0.0)
    hessian = coupling.copy()
    np.fill_diagonal(hessian, -coupling.sum(axis=1) - 1 / t)
    return hessian


def freeze_prediction(n_vars: int, t: float) -> Vector:
    """sqrt(2t) z_N, the frozen configuration at time t."""
    if t < 0:
        raise NegativeParameterException("t", t)
    return np.sqrt(2 * t) * hermite_roots(n_vars).roots


def freeze_log_density(v: VectorLike, t: float, k: float, x: VectorLike) -> float:
    """Large-k exponent of the density of y / sqrt(k) for a process started at x."""
    _check_time(t)
    if k <= 0:
        raise NegativeParameterException("k", k)
    v = np.asarray(v, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    n_vars = len(v)
    return (
        k * freeze_eval(v, t)
        + np.sqrt(k) / n_vars * float(np.sum(x) * np.sum(v))
        + n_vars / 2 * log(k)
        + log(factorial(n_vars))
        - n_vars / 2 * log(2 * np.pi * t)
        - float(x @ x) / (2 * t)
    )


@dataclass(frozen=True, eq=False)
class FreezeTrajectory:
    times: Vector
    states: Matrix

    @property
    def final(self) -> Vector:
        return self.states[-1]


def freeze_ode(
    v0: VectorLike,
    t0: float,
    t1: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_steps: int = 1_000_000,
) -> FreezeTrajectory:
    """Integrates the noiseless dynamics dv_i/dt = sum_{j != i} 1/(v_i - v_j) from t0 to t1.

    Args:
        v0 (VectorLike): Strictly increasing initial configuration.
        t0 (float): Start time, t0 > 0.
        t1 (float): End time, t1 > t0.
        rtol (float, optional): Relative tolerance of the RK45 pair. Defaults to 1e-10.
        atol (float, optional): Absolute tolerance. Defaults to 1e-12.
        max_steps (int, optional): Cap on accepted steps. Defaults to 1_000_000.

    Raises:
        UnorderedInputException: v0 is not strictly increasing.
        IntegratorException: The step size collapsed, the step cap was hit or the order broke.

    Returns:
        FreezeTrajectory: Every accepted step, starting at (t0, v0).
    """
    _check_time(t0)
    if t1 <= t0:
        raise OutOfRangeException("t1", t1, f"({t0}, inf)")
    v0 = np.asarray(v0, dtype=np.float64)
    if np.any(np.diff(v0) <= 0):
        raise UnorderedInputException(v0)

    solver = RK45(lambda _t, v: _pair_field(v), t0, v0, t1, rtol=rtol, atol=atol)
    times, states = [t0], [v0.copy()]
    while solver.status == "running":
        if len(times) > max_steps:
            raise IntegratorException(f"step cap {max_steps} reached at t={solver.t}")
        message = solver.step()
        if solver.status == "failed":
            raise IntegratorException(f"integration failed at t={solver.t}: {message}")
        if np.any(np.diff(solver.y) <= 0):
            raise IntegratorException(f"ordering lost at t={solver.t}")
        times.append(solver.t)
        states.append(solver.y.copy())
    logger.debug("freeze ODE: %d steps from t=%g to t=%g", len(times) - 1, t0, t1)
    return FreezeTrajectory(np.array(times), np.array(states))

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from dunkl_intertwining.density import weight_norm
from dunkl_intertwining.exceptions import OutOfRangeException
from dunkl_intertwining.hermite import freeze_prediction
from dunkl_intertwining.simulation.dyson import simulate_dyson
from dunkl_intertwining.simulation.simulation_typing import Seed, SimConfig
from dunkl_intertwining.typing import Matrix, Vector, VectorLike

logger = logging.getLogger(__name__)

MIN_FREEZE_K = 100.0
NORM_CHUNK = 100_000


@dataclass(frozen=True, eq=False)
class FreezeRun:
    """Deviations of the rescaled final configurations y / sqrt(k) from sqrt(2t) z_N.

    Centered quantities subtract each configuration's mean first; the prediction has mean zero.
    """

    k: float
    scaled: Matrix
    per_particle: Vector
    max_deviation: float
    rms_deviation: float
    uncentered_max_deviation: float


@dataclass(frozen=True, eq=False)
class FreezeReport:
    n_vars: int
    t: float
    prediction: Vector
    runs: tuple[FreezeRun, ...]
    x0_gap_centered: float
    x0_gap_uncentered: float

    @property
    def rms_decreasing(self) -> bool:
        rms = [run.rms_deviation for run in self.runs]
        return all(b < a for a, b in zip(rms, rms[1:]))


def _freeze_run(config: SimConfig, x0: Vector, prediction: Vector, workers: int | None) -> FreezeRun:
    scaled = simulate_dyson(config, x0, workers).final() / np.sqrt(config.k)
    centered = scaled - scaled.mean(axis=1, keepdims=True)
    deviation = centered - prediction
    run = FreezeRun(
        k=config.k,
        scaled=scaled,
        per_particle=np.abs(deviation).mean(axis=0),
        max_deviation=float(np.abs(deviation).max(axis=1).mean()),
        rms_deviation=float(np.sqrt(np.mean(deviation**2))),
        uncentered_max_deviation=float(np.abs(scaled - prediction).max(axis=1).mean()),
    )
    logger.info("freeze k=%g: max deviation %.4g, rms %.4g", run.k, run.max_deviation, run.rms_deviation)
    return run


def freeze_experiment(
    config: SimConfig,
    x0: VectorLike,
    k_factors: tuple[float, ...] = (1.0, 4.0),
    shift: float = 10.0,
    workers: int | None = None,
) -> FreezeReport:
    """Simulates Dyson's model at large k and compares y / sqrt(k) at config.t_end to sqrt(2t) z_N.

    Args:
        config (SimConfig): Base settings; config.k >= 100.
        x0 (VectorLike): Strictly increasing start configuration.
        k_factors (tuple[float, ...], optional): Multiples of config.k to run. Defaults to (1.0, 4.0).
        shift (float, optional): Offset of the second start x0 + shift used for the \
            x0-independence comparison at the base k. Defaults to 10.0.
        workers (int | None, optional): Worker processes per simulation. Defaults to None.

    Returns:
        FreezeReport: One FreezeRun per k factor and the gap between the mean configurations of both starts.
    """
    if config.k < MIN_FREEZE_K:
        raise OutOfRangeException("k", config.k, f"[{MIN_FREEZE_K}, inf)")
    x0 = np.asarray(x0, dtype=np.float64)
    prediction = freeze_prediction(config.n_vars, config.t_end)

    runs = tuple(_freeze_run(replace(config, k=config.k * f), x0, prediction, workers) for f in k_factors)
    shifted = _freeze_run(replace(config, k=config.k * k_factors[0]), x0 + shift, prediction, workers)

    base = runs[0].scaled
    centered_gap = (base - base.mean(axis=1, keepdims=True)).mean(axis=0) - (
        shifted.scaled - shifted.scaled.mean(axis=1, keepdims=True)
    ).mean(axis=0)
    return FreezeReport(
        n_vars=config.n_vars,
        t=config.t_end,
        prediction=prediction,
        runs=runs,
        x0_gap_centered=float(np.max(np.abs(centered_gap))),
        x0_gap_uncentered=float(np.max(np.abs(base.mean(axis=0) - shifted.scaled.mean(axis=0)))),
    )


@dataclass(frozen=True)
class NormCheck:
    n_vars: int
    k: float
    n_samples: int
    estimate: float
    stderr: float
    closed_form: float

    @property
    def relative_error(self) -> float:
        return abs(self.estimate - self.closed_form) / self.closed_form

    @property
    def sigmas(self) -> float:
        return abs(self.estimate - self.closed_form) / self.stderr if self.stderr > 0 else 0.0


def mc_norm_check(n_vars: int, k: float, n_samples: int, seed: Seed) -> NormCheck:
    """Monte Carlo estimate of c_k = (2pi)^(N/2) E[|h_N(G)|^(2k)] / 2^gamma for standard Gaussian G."""
    if not 1 <= n_vars <= 4:
        raise OutOfRangeException("N", n_vars, "[1, 4]")
    if not 0 < k <= 2:
        raise OutOfRangeException("k", k, "(0, 2]")
    if n_samples < 2:
        raise OutOfRangeException("n_samples", n_samples, "[2, inf)")

    norm = weight_norm(n_vars, k)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    first, second = np.triu_indices(n_vars, k=1)
    total = total_sq = 0.0
    remaining = n_samples
    while remaining:
        size = min(NORM_CHUNK, remaining)
        g = rng.standard_normal((size, n_vars))
        w = np.prod(np.abs(g[:, second] - g[:, first]) ** (2 * k), axis=1) / 2 ** float(norm.gamma)
        total += float(w.sum())
        total_sq += float((w**2).sum())
        remaining -= size

    scale = (2 * np.pi) ** (n_vars / 2)
    mean = total / n_samples
    variance = max(total_sq / n_samples - mean**2, 0.0) * n_samples / (n_samples - 1)
    return NormCheck(
        n_vars=n_vars,
        k=k,
        n_samples=n_samples,
        estimate=scale * mean,
        stderr=scale * np.sqrt(variance / n_samples),
        closed_form=norm.c_k,
    )

"""Euler-Maruyama simulation of Dyson's model and of the exchange-jump Dunkl process.

Each trajectory n draws from its own Philox streams keyed (seed, n, stream), so an
ensemble does not depend on how trajectories are split into blocks or workers.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from dunkl_intertwining.density import require_strictly_increasing
from dunkl_intertwining.exceptions import OutOfRangeException
from dunkl_intertwining.simulation.simulation_exceptions import (
    GuardDepthExhaustedException,
    InvalidConfigException,
    ThinningCapException,
)
from dunkl_intertwining.simulation.simulation_typing import (
    Ensemble,
    JumpEvent,
    Seed,
    SimConfig,
    TrajectoryId,
)
from dunkl_intertwining.typing import Matrix, Vector, VectorLike

logger = logging.getLogger(__name__)

INCREMENTS, REFINEMENT, JUMPS, SUBSTEPS, PERMUTATION = range(5)

WORKERS_ENV = "DUNKL_WORKERS"
CHUNK_STEPS = 1024
MAX_RATE_DT = 0.1

BlockResult = tuple[np.ndarray, list[tuple[JumpEvent, ...]]]


def trajectory_rng(seed: Seed, trajectory: TrajectoryId, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trajectory, stream])))


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(value)
    except ValueError as exc:
        raise InvalidConfigException(WORKERS_ENV, value, "not an integer") from exc
    if workers < 1:
        raise InvalidConfigException(WORKERS_ENV, workers, "must be positive")
    return workers


def interaction(x: Matrix) -> Matrix:
    """sum_{j != i} 1 / (x_i - x_j) for every row of x."""
    n_vars = x.shape[-1]
    d = x[..., :, None] - x[..., None, :]
    diagonal = np.arange(n_vars)
    d[..., diagonal, diagonal] = np.inf
    return (1.0 / d).sum(axis=-1)


def order_kept(before: Matrix, after: Matrix) -> np.ndarray:
    """Per row: the particles of `after`, read in the order of `before`, are strictly increasing."""
    order = np.argsort(before, axis=-1)
    return np.all(np.diff(np.take_along_axis(after, order, axis=-1), axis=-1) > 0, axis=-1)


def _refine(
    x: Vector,
    dw: Vector,
    h: float,
    t: float,
    depth: int,
    rng: np.random.Generator,
    config: SimConfig,
    trajectory: TrajectoryId,
) -> Vector:
    """One step of length h, split recursively by Brownian-bridge halving while the order breaks."""
    proposal = x + config.k * interaction(x) * h + dw
    if order_kept(x, proposal):
        return proposal
    if depth == config.guard_depth:
        raise GuardDepthExhaustedException(trajectory, t, depth)
    first = dw / 2 + np.sqrt(h / 4) * rng.standard_normal(len(x))
    middle = _refine(x, first, h / 2, t, depth + 1, rng, config, trajectory)
    return _refine(middle, dw - first, h / 2, t + h / 2, depth + 1, rng, config, trajectory)


def _scalar_jumps(
    x: Vector,
    h: float,
    t: float,
    n_sub: int,
    rng: np.random.Generator,
    config: SimConfig,
    pairs: tuple[np.ndarray, np.ndarray],
    events: list[JumpEvent],
) -> None:
    first, second = pairs
    sub = h / n_sub
    for s in range(n_sub):
        rates = config.k / (x[first] - x[second]) ** 2
        fire = rng.random(len(first)) < np.minimum(1.0, rates * sub)
        for q in np.flatnonzero(fire):
            i, j = first[q], second[q]
            x[i], x[j] = x[j], x[i]
            events.append(JumpEvent(t + (s + 1) * sub, int(i), int(j)))


def _jump_step(
    x: Matrix,
    uniforms: Matrix,
    h: float,
    t: float,
    config: SimConfig,
    start: TrajectoryId,
    pairs: tuple[np.ndarray, np.ndarray],
    substep_rngs: dict[int, np.random.Generator],
    events: list[list[JumpEvent]],
) -> None:
    """Exchange jumps over one step, positions frozen at the end of the diffusive move."""
    first, second = pairs
    rates = config.k / (x[:, first] - x[:, second]) ** 2
    n_sub = np.maximum(1, np.ceil(rates.max(axis=1) * h / MAX_RATE_DT)).astype(int)

    fire = (uniforms < np.minimum(1.0, rates * h)) & (n_sub == 1)[:, None]
    for q in range(len(first)):
        rows = np.flatnonzero(fire[:, q])
        if not len(rows):
            continue
        i, j = first[q], second[q]
        x[rows, i], x[rows, j] = x[rows, j], x[rows, i]
        for b in rows:
            events[b].append(JumpEvent(t + h, int(i), int(j)))

    for b in np.flatnonzero(n_sub > 1):
        trajectory = start + int(b)
        if n_sub[b] > config.thinning_cap:
            raise ThinningCapException(trajectory, t, int(n_sub[b]), config.thinning_cap)
        if b not in substep_rngs:
            substep_rngs[b] = trajectory_rng(config.seed, trajectory, SUBSTEPS)
        rng = substep_rngs[b]
        _scalar_jumps(x[b], h, t, int(n_sub[b]), rng, config, pairs, events[b])


def _start_positions(config: SimConfig, x0: Vector, start: TrajectoryId, stop: TrajectoryId) -> Matrix:
    if not config.symmetric_start:
        return np.tile(x0, (stop - start, 1))
    return np.stack(
        [x0[trajectory_rng(config.seed, n, PERMUTATION).permutation(len(x0))] for n in range(start, stop)]
    )


def run_block(config: SimConfig, x0: Vector, start: TrajectoryId, stop: TrajectoryId, jumps: bool) -> BlockResult:
    """Simulates trajectories start..stop-1; picklable so it can run in a worker process."""
    n_vars, n_steps, h = config.n_vars, config.n_steps, config.step
    size = stop - start
    pairs = np.triu_indices(n_vars, k=1)
    increments = [trajectory_rng(config.seed, n, INCREMENTS) for n in range(start, stop)]
    jump_uniforms = [trajectory_rng(config.seed, n, JUMPS) for n in range(start, stop)] if jumps else []
    refinement_rngs: dict[int, np.random.Generator] = {}
    substep_rngs: dict[int, np.random.Generator] = {}
    events: list[list[JumpEvent]] = [[] for _ in range(size)]

    record_steps = config.record_steps
    record = np.empty((size, config.n_grid, n_vars))
    x = _start_positions(config, x0, start, stop)
    record[:, 0] = x
    slot = 1

    for step in range(n_steps):
        offset = step % CHUNK_STEPS
        if offset == 0:
            length = min(CHUNK_STEPS, n_steps - step)
            noise = np.sqrt(h) * np.stack([rng.standard_normal((length, n_vars)) for rng in increments])
            if jumps:
                uniforms = np.stack([rng.random((length, len(pairs[0]))) for rng in jump_uniforms])
        t = step * h
        dw = noise[:, offset]
        proposal = x + config.k * interaction(x) * h + dw
        for b in np.flatnonzero(~order_kept(x, proposal)):
            trajectory = start + int(b)
            if b not in refinement_rngs:
                refinement_rngs[b] = trajectory_rng(config.seed, trajectory, REFINEMENT)
            rng = refinement_rngs[b]
            proposal[b] = _refine(x[b], dw[b], h, t, 0, rng, config, trajectory)
        x = proposal
        if jumps:
            _jump_step(x, uniforms[:, offset], h, t, config, start, pairs, substep_rngs, events)
        while slot < config.n_grid and record_steps[slot] == step + 1:
            record[:, slot] = x
            slot += 1

    assert slot == config.n_grid
    return record, [tuple(e) for e in events]


def _simulate(config: SimConfig, x0: VectorLike, jumps: bool, workers: int | None) -> Ensemble:
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (config.n_vars,):
        raise OutOfRangeException("len(x0)", len(x0), f"N = {config.n_vars}")
    require_strictly_increasing(x0)
    workers = workers or default_workers()

    blocks = [(s, min(s + config.block_size, config.n_traj)) for s in range(0, config.n_traj, config.block_size)]
    args = [(config, x0, start, stop, jumps) for start, stop in blocks]
    results: list[BlockResult] = []
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for (start, stop), result in zip(blocks, executor.map(run_block, *zip(*args))):
                logger.info("trajectories %d-%d done", start, stop - 1)
                results.append(result)
    else:
        for (start, stop), arg in zip(blocks, args):
            results.append(run_block(*arg))
            logger.info("trajectories %d-%d done", start, stop - 1)

    positions = np.concatenate([record for record, _ in results])
    events = tuple(e for _, block_events in results for e in block_events)
    return Ensemble(config, config.times, positions, events)


def simulate_dyson(config: SimConfig, x0: VectorLike, workers: int | None = None) -> Ensemble:
    """Dyson's model dX_i = dB_i + (beta/2) sum_{j != i} dt / (X_i - X_j), beta = 2k.

    Args:
        config (SimConfig): Run settings; symmetric_start permutes x0 per trajectory.
        x0 (VectorLike): Strictly increasing start configuration.
        workers (int | None, optional): Worker processes. Defaults to $DUNKL_WORKERS or 1.

    Raises:
        UnorderedInputException: x0 is not strictly increasing.
        GuardDepthExhaustedException: Step halving could not keep the particles ordered.

    Returns:
        Ensemble: Labeled positions on config.times; the jump log is empty.
    """
    return _simulate(config, x0, False, workers)


def simulate_dunkl(config: SimConfig, x0: VectorLike, workers: int | None = None) -> Ensemble:
    """Dyson dynamics plus exchange jumps x -> sigma_ij x at rate k / (x_i - x_j)^2 per pair.

    Raises:
        ThinningCapException: More than config.thinning_cap jump substeps were needed in one step.
    """
    return _simulate(config, x0, True, workers)

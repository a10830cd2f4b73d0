from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Any, NamedTuple, TypeAlias

import numpy as np

from dunkl_intertwining.simulation.simulation_exceptions import InvalidConfigException
from dunkl_intertwining.typing import Matrix, Vector

TrajectoryId: TypeAlias = int
Seed: TypeAlias = int


class JumpEvent(NamedTuple):
    time: float
    i: int
    j: int


@dataclass(frozen=True)
class SimConfig:
    """Settings shared by every trajectory of a run.

    The time grid has n_steps = round(t_end / dt) Euler steps of length t_end / n_steps;
    positions are recorded at n_grid evenly spaced steps including both ends.
    """

    n_vars: int
    k: float
    dt: float
    t_end: float
    n_traj: int
    seed: Seed = 0
    guard_depth: int = 40
    thinning_cap: int = 10_000
    n_grid: int = 101
    block_size: int = 256
    symmetric_start: bool = False

    def __post_init__(self) -> None:
        if self.n_vars < 1:
            raise InvalidConfigException("n_vars", self.n_vars, "need at least one particle")
        if not self.k > 0:
            raise InvalidConfigException("k", self.k, "beta = 2k must be positive")
        if not self.dt > 0 or not self.t_end > 0:
            raise InvalidConfigException("dt", (self.dt, self.t_end), "dt and t_end must be positive")
        if self.dt > self.t_end:
            raise InvalidConfigException("dt", self.dt, f"larger than t_end={self.t_end}")
        if self.n_traj < 1:
            raise InvalidConfigException("n_traj", self.n_traj, "need at least one trajectory")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfigException("seed", self.seed, "must fit in 64 unsigned bits")
        if not 1 <= self.guard_depth <= 60:
            raise InvalidConfigException("guard_depth", self.guard_depth, "must be in [1, 60]")
        if self.thinning_cap < 1:
            raise InvalidConfigException("thinning_cap", self.thinning_cap, "must be positive")
        if not 2 <= self.n_grid <= self.n_steps + 1:
            raise InvalidConfigException("n_grid", self.n_grid, f"must be in [2, {self.n_steps + 1}]")
        if self.block_size < 1:
            raise InvalidConfigException("block_size", self.block_size, "must be positive")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SimConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfigException("keys", sorted(unknown), "unknown configuration keys")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str, **overrides: Any) -> SimConfig:
        """Reads a JSON object whose keys mirror the field names; non-None overrides win."""
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise InvalidConfigException("config", path, "expected a JSON object")
        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @property
    def beta(self) -> float:
        return 2 * self.k

    @property
    def n_steps(self) -> int:
        return max(1, round(self.t_end / self.dt))

    @property
    def step(self) -> float:
        return self.t_end / self.n_steps

    @property
    def record_steps(self) -> np.ndarray:
        return np.round(np.linspace(0, self.n_steps, self.n_grid)).astype(int)

    @property
    def times(self) -> Vector:
        return self.record_steps * self.step


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Labeled trajectories on a common time grid.

    positions[n, g, i] is particle i of trajectory n at times[g]. Trajectory n was
    driven by the streams keyed (config.seed, n, stream) for the five stream ids of
    dunkl_intertwining.simulation.dyson.
    """

    config: SimConfig
    times: Vector
    positions: np.ndarray
    jumps: tuple[tuple[JumpEvent, ...], ...]

    @property
    def n_traj(self) -> int:
        return self.positions.shape[0]

    @property
    def n_vars(self) -> int:
        return self.positions.shape[2]

    @property
    def sorted_positions(self) -> np.ndarray:
        return np.sort(self.positions, axis=2)

    def final(self, sort: bool = True) -> Matrix:
        return (self.sorted_positions if sort else self.positions)[:, -1, :]

    def jump_counts(self) -> np.ndarray:
        return np.array([len(events) for events in self.jumps])

    def seed_lineage(self, trajectory: TrajectoryId) -> tuple[Seed, TrajectoryId]:
        return self.config.seed, trajectory

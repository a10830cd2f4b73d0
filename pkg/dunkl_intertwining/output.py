"""Machine-readable outputs: CSV tables at 17 significant digits, JSON documents and run manifests."""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from dunkl_intertwining import __version__
from dunkl_intertwining.partition import Partition
from dunkl_intertwining.simulation.simulation_typing import Ensemble

FLOAT_FORMAT = "%.17g"


def format_fraction(value: Fraction) -> str:
    """Renders as p/q, or p alone for integers."""
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def to_jsonable(obj: Any) -> Any:
    match obj:
        case Fraction():
            return format_fraction(obj)
        case Partition():
            return list(obj.parts)
        case np.ndarray():
            return obj.tolist()
        case np.integer():
            return int(obj)
        case np.floating():
            return float(obj)
        case dict():
            return {str(key): to_jsonable(value) for key, value in obj.items()}
        case list() | tuple():
            return [to_jsonable(value) for value in obj]
        case _:
            return obj


def stable_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True)


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def write_json(payload: Any, path: str | None = None) -> None:
    """Writes to path, or to stdout when path is None."""
    text = stable_json(payload) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def write_table(path: str, header: list[str], rows: np.ndarray, integer_columns: int = 0) -> None:
    """Numeric CSV with a header row; the first integer_columns columns are written as integers."""
    fmt = ["%d"] * integer_columns + [FLOAT_FORMAT] * (rows.shape[1] - integer_columns)
    np.savetxt(path, rows, fmt=fmt, delimiter=",", header=",".join(header), comments="")


def read_table(path: str) -> tuple[list[str], np.ndarray]:
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip().split(",")
    return header, np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=1))


def ensemble_table(e: Ensemble, sort: bool = True) -> tuple[list[str], np.ndarray]:
    """One row per (trajectory, time): trajectory, time, x_0 .. x_{N-1}."""
    positions = e.sorted_positions if sort else e.positions
    n_traj, n_grid, n_vars = positions.shape
    trajectories = np.repeat(np.arange(n_traj), n_grid)
    times = np.tile(e.times, n_traj)
    rows = np.column_stack([trajectories, times, positions.reshape(n_traj * n_grid, n_vars)])
    return ["trajectory", "time"] + [f"x_{i}" for i in range(n_vars)], rows


def table_to_ensemble_positions(rows: np.ndarray, n_grid: int) -> np.ndarray:
    n_vars = rows.shape[1] - 2
    return rows[:, 2:].reshape(-1, n_grid, n_vars)


def jump_table(e: Ensemble) -> tuple[list[str], np.ndarray]:
    rows = [(n, event.time, event.i, event.j) for n, events in enumerate(e.jumps) for event in events]
    return ["trajectory", "time", "i", "j"], np.array(rows, dtype=np.float64).reshape(-1, 4)


@dataclass
class RunManifest:
    """Everything needed to rerun a command: its arguments, resolved config and output digests."""

    command: str
    arguments: dict[str, Any]
    config: dict[str, Any] = field(default_factory=dict)
    seed_lineage: str = ""
    version: str = __version__
    started: float = field(default_factory=time.time)
    wall_clock: float = 0.0
    outputs: dict[str, str] = field(default_factory=dict)

    def add_output(self, path: str) -> None:
        self.outputs[os.path.basename(path)] = sha256_file(path)

    def finish(self) -> None:
        self.wall_clock = time.time() - self.started

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "arguments": self.arguments,
            "config": self.config,
            "seed_lineage": self.seed_lineage,
            "version": self.version,
            "started": self.started,
            "wall_clock": self.wall_clock,
            "outputs": self.outputs,
        }

    def write(self, directory: str) -> str:
        self.finish()
        path = os.path.join(directory, "manifest.json")
        write_json(self.to_dict(), path)
        return path

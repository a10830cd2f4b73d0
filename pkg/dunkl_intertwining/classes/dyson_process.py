from __future__ import annotations

from dataclasses import replace
from functools import cached_property
from typing import TYPE_CHECKING

from dunkl_intertwining.hermite import freeze_prediction
from dunkl_intertwining.simulation.dyson import simulate_dunkl, simulate_dyson
from dunkl_intertwining.simulation.experiments import FreezeReport, freeze_experiment
from dunkl_intertwining.simulation.simulation_typing import SimConfig
from dunkl_intertwining.typing import Vector, VectorLike

if TYPE_CHECKING:
    from dunkl_intertwining.simulation.simulation_typing import Ensemble


class DysonProcess:
    """Dyson's model at beta = 2k together with its symmetric Dunkl counterpart."""

    config: SimConfig
    workers: int | None

    def __init__(self, config: SimConfig, workers: int | None = None) -> None:
        self.config = config
        self.workers = workers

    @property
    def beta(self) -> float:
        return self.config.beta

    @cached_property
    def frozen_configuration(self) -> Vector:
        return freeze_prediction(self.config.n_vars, self.config.t_end)

    def simulate(self, x0: VectorLike) -> Ensemble:
        return simulate_dyson(self.config, x0, self.workers)

    def simulate_dunkl(self, x0: VectorLike, symmetric: bool = True) -> Ensemble:
        """Exchange-jump process; by default every trajectory starts from a uniformly permuted x0."""
        return simulate_dunkl(replace(self.config, symmetric_start=symmetric), x0, self.workers)

    def freeze(self, x0: VectorLike, k_factors: tuple[float, ...] = (1.0, 4.0), shift: float = 10.0) -> FreezeReport:
        return freeze_experiment(self.config, x0, k_factors, shift, self.workers)

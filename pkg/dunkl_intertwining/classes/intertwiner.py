from __future__ import annotations

from functools import cached_property

from dunkl_intertwining.density import (
    SeriesControls,
    SeriesResult,
    TpdQuery,
    WeightNorm,
    dunkl_tpd_symmetric,
    weight_norm,
)
from dunkl_intertwining.intertwine import (
    IntertwineLimit,
    IntertwineResult,
    IntertwiningCheck,
    check_intertwining,
    intertwine_limit,
    intertwine_monomial,
)
from dunkl_intertwining.partition import Partition
from dunkl_intertwining.symfunc import as_exact
from dunkl_intertwining.typing import ExactLike, ExactScalar, VectorLike


class Intertwiner:
    """V_k for the symmetric group S_N acting on N coordinates."""

    k: ExactScalar
    n_vars: int
    controls: SeriesControls

    def __init__(self, k: ExactLike, n_vars: int, controls: SeriesControls | None = None) -> None:
        self.k = as_exact(k)
        self.n_vars = n_vars
        self.controls = controls or SeriesControls()

    def apply(self, lam: Partition) -> IntertwineResult:
        return intertwine_monomial(lam, self.k, self.n_vars)

    def limit(self, lam: Partition) -> IntertwineLimit:
        return intertwine_limit(lam, self.n_vars)

    def check(self, lam: Partition) -> IntertwiningCheck:
        return check_intertwining(lam, self.k, self.n_vars)

    @cached_property
    def weight_norm(self) -> WeightNorm:
        return weight_norm(self.n_vars, self.k)

    def transition_density(self, t: float, x: VectorLike, y: VectorLike) -> SeriesResult:
        """The symmetric Dunkl density p_k^s(t, y | x) with this intertwiner's series controls."""
        return dunkl_tpd_symmetric(TpdQuery.with_k(t, x, y, float(self.k), self.controls))

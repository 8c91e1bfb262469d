"""Synthetic experiment generation: the validation oracle for the regression engine.

Records are generated on the Cartesian grid ``l0_values x r_values x
d_values`` (in that lexicographic order) from a known truth law, with
optional Gaussian noise added in log space (multiplicative on the observed
value), matching the regression's noise model.

Determinism contract: the generator is NumPy's PCG64 via
``numpy.random.default_rng(seed)``, drawing one standard-normal deviate per
grid point in row order.  Identical ``SyntheticConfig`` values therefore
produce bit-identical records.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularDesignError
from .laws import CompressionLaw

__all__ = ["SyntheticConfig", "generate"]


def _as_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class SyntheticConfig:
    """Grid, truth law, noise level and seed for one synthetic experiment."""

    truth: CompressionLaw
    l0_values: tuple[float, ...]
    r_values: tuple[float, ...]
    d_values: tuple[float, ...]
    noise_std: float = 0.0
    seed: int = 0
    model_id: str = "synthetic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "l0_values", _as_tuple(self.l0_values))
        object.__setattr__(self, "r_values", _as_tuple(self.r_values))
        object.__setattr__(self, "d_values", _as_tuple(self.d_values))
        if not (self.l0_values and self.r_values and self.d_values):
            raise DomainError("all three grid axes must be nonempty")
        for l0 in self.l0_values:
            if not (math.isfinite(l0) and l0 > 0.0):
                raise DomainError(f"l0 grid values must be > 0, got {l0}")
        for r in self.r_values:
            if not (math.isfinite(r) and 0.0 <= r < 1.0):
                raise DomainError(f"r grid values must lie in [0, 1), got {r}")
        for d in self.d_values:
            if not (math.isfinite(d) and d >= 0.0):
                raise DomainError(f"d grid values must be >= 0, got {d}")
        if len(set(self.r_values)) + len(set(self.d_values)) < 3:
            raise DomainError("need at least 3 distinct values across the r and d grids for a full-rank design")
        if not (math.isfinite(self.noise_std) and self.noise_std >= 0.0):
            raise DomainError(f"noise_std must be >= 0, got {self.noise_std}")


def generate(config: SyntheticConfig) -> "list[ExperimentRecord]":
    """Draw one record per grid point from the truth law.

    The observed value is ``exp(alpha*log l0 + beta*log(1+r) +
    gamma*log(1 + 1/(d+epsilon)) + z)`` with ``z ~ N(0, noise_std**2)``.

    Raises:
        SingularDesignError: When the grid cannot support a full-rank
            three-column design (e.g. constant ``l0 = 1`` with a constant
            ``d`` axis).
    """
    from .regression import ExperimentRecord  # local import avoids a cycle at module load

    law = config.truth
    points = list(itertools.product(config.l0_values, config.r_values, config.d_values))
    design = np.array(
        [
            [math.log(l0), math.log1p(r), math.log1p(1.0 / (d + law.epsilon))]
            for l0, r, d in points
        ]
    )
    full_rank = design.shape[0] >= 3 and np.linalg.matrix_rank(design) == 3
    if not full_rank or np.linalg.cond(design) > 1e8:
        raise SingularDesignError("grid is rank deficient for the full three-column design")

    rng = np.random.default_rng(config.seed)
    noise = rng.normal(0.0, config.noise_std, size=len(points)) if config.noise_std > 0 else np.zeros(len(points))

    log_mean = design @ np.array([law.alpha, law.beta, law.gamma])
    records = []
    for (l0, r, d), mu, z in zip(points, log_mean, noise):
        records.append(
            ExperimentRecord(
                model_id=config.model_id,
                metric=law.metric,
                l0=l0,
                r=r,
                d=d,
                l=math.exp(mu + z),
            )
        )
    return records

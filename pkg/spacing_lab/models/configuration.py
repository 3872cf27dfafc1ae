import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError


class SamplerKind(enum.Enum):
    TRIDIAGONAL = "tridiagonal"
    MCMC = "mcmc"
    CUE = "cue"


@dataclass(frozen=True, eq=False)
class Configuration:
    """
    One sampled N-tuple of ordered particles plus its provenance.

    Sampled configurations are strictly increasing; unfolded ones may carry
    ties at 0 or N where out-of-support points were clamped.
    """
    points: np.ndarray
    model_tag: str
    seed: int
    sampler: SamplerKind
    unfolded: bool = False
    acceptance_rate: Optional[float] = None
    n: int = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("Configuration needs a non-empty one-dimensional point set")
        if not np.all(np.isfinite(pts)):
            raise DomainError("Configuration points must be finite")
        gaps = np.diff(pts)
        if np.any(gaps < 0):
            raise DomainError("Configuration points must be sorted ascending")
        if not self.unfolded and np.any(gaps == 0):
            raise DomainError("Sampled configuration has coincident points")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        pts.setflags(write=False)
        object.__setattr__(self, 'points', pts)
        object.__setattr__(self, 'seed', int(self.seed))
        object.__setattr__(self, 'n', int(pts.size))

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.model_tag == other.model_tag
            and self.seed == other.seed
            and self.sampler == other.sampler
            and self.unfolded == other.unfolded
            and np.array_equal(self.points, other.points)
        )

    __hash__ = None

    def with_points(self, points: Sequence[float], unfolded: bool) -> 'Configuration':
        return replace(self, points=np.asarray(points, dtype=float), unfolded=unfolded)

    def as_dict(self):
        return {
            "n": self.n,
            "model_tag": self.model_tag,
            "seed": self.seed,
            "sampler": self.sampler.value,
            "unfolded": self.unfolded,
            "acceptance_rate": self.acceptance_rate,
        }


@dataclass(frozen=True)
class McmcParams:
    """Metropolis schedule: sweeps are N proposed single-particle moves."""
    burn_in: int = 2000
    thinning: int = 50
    initial_step: Optional[float] = None  # defaults to 1/sqrt(N)
    target_acceptance: float = 0.23

    def __post_init__(self):
        if self.burn_in < 1 or self.thinning < 1:
            raise DomainError("burn_in and thinning must be positive")
        if self.initial_step is not None and not (self.initial_step > 0 and math.isfinite(self.initial_step)):
            raise DomainError("initial_step must be positive")
        if not 0 < self.target_acceptance < 1:
            raise DomainError("target_acceptance must lie in (0, 1)")

    def step_for(self, n: int) -> float:
        return self.initial_step if self.initial_step is not None else 1.0 / math.sqrt(n)

    @classmethod
    def from_config(cls, config) -> 'McmcParams':
        return cls(
            burn_in=config.MCMC_BURN_IN,
            thinning=config.MCMC_THINNING,
            initial_step=config.MCMC_INITIAL_STEP,
            target_acceptance=config.MCMC_TARGET_ACCEPTANCE
        )

    def as_dict(self):
        return {
            "burn_in": self.burn_in,
            "thinning": self.thinning,
            "initial_step": self.initial_step,
            "target_acceptance": self.target_acceptance,
        }

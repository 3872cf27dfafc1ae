from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ..errors import DomainError
from .configuration import McmcParams, SamplerKind
from .ensemble import EnsembleModel
from .spacing import IntervalSpec, Normalization


@dataclass(frozen=True)
class GaudinParams:
    s_max: float = 5.0
    step: float = 0.005
    order: int = 40


@dataclass(frozen=True)
class StudyConfig:
    """Everything needed to regenerate a study report bit for bit."""
    model: EnsembleModel
    sizes: Tuple[int, ...]
    intervals: Tuple[IntervalSpec, ...] = ()
    window_lengths: Tuple[float, ...] = ()
    replicas: int = 100
    base_seed: int = 0
    gaudin: GaudinParams = field(default_factory=GaudinParams)
    output_dir: Optional[str] = None  # None writes under the global --out-dir
    sampler: Optional[SamplerKind] = None  # None selects automatically
    mcmc: McmcParams = field(default_factory=McmcParams)
    model_path: Optional[str] = None

    def __post_init__(self):
        if self.replicas < 1:
            raise DomainError("replicas must be at least 1")
        if not self.sizes:
            raise DomainError("a study needs at least one ensemble size")
        if any(n < 2 for n in self.sizes):
            raise DomainError("ensemble sizes must be at least 2")
        if not self.intervals and not self.window_lengths:
            raise DomainError("a study needs interval specs or window lengths")
        if self.base_seed < 0:
            raise DomainError("base_seed must be nonnegative")

    def intervals_for(self, n: int) -> List[IntervalSpec]:
        """Interval specs followed by centered windows of the configured lengths."""
        specs = list(self.intervals)
        specs.extend(IntervalSpec.centered_window(length, n) for length in self.window_lengths)
        return specs

    def as_dict(self):
        return {
            "model_tag": self.model.tag,
            "sizes": list(self.sizes),
            "intervals": [spec.label for spec in self.intervals],
            "window_lengths": list(self.window_lengths),
            "replicas": self.replicas,
            "base_seed": self.base_seed,
            "sampler": self.sampler.value if self.sampler else "auto",
        }


@dataclass(frozen=True)
class StudyRow:
    """One (N, interval, normalization) line of a convergence report."""
    model_tag: str
    n: int
    interval: str
    length: float
    replicas: int
    normalization: Normalization
    mean_distance: float
    std_error: float
    mean_mass_deviation: float
    empty_replicas: int
    seed: int

    HEADER = ("model_tag", "N", "interval", "length", "R", "normalization",
              "mean_distance", "std_error", "mean_mass_deviation", "empty_replicas", "seed")

    def values(self):
        return (self.model_tag, self.n, self.interval, self.length, self.replicas,
                self.normalization.value, self.mean_distance, self.std_error,
                self.mean_mass_deviation, self.empty_replicas, self.seed)


@dataclass(frozen=True)
class IntensityRow:
    model_tag: str
    n: int
    interval: str
    length: float
    replicas: int
    pooled_distance: float
    single_mean: float
    single_median: float
    intensity_mass: float
    seed: int

    HEADER = ("model_tag", "N", "interval", "length", "R", "pooled_distance",
              "single_mean", "single_median", "intensity_mass", "seed")

    def values(self):
        return (self.model_tag, self.n, self.interval, self.length, self.replicas,
                self.pooled_distance, self.single_mean, self.single_median,
                self.intensity_mass, self.seed)


@dataclass(frozen=True)
class RateFit:
    """Least-squares line through (log |I_N|, log mean distance)."""
    points: Tuple[Tuple[float, float], ...]
    slope: float
    intercept: float
    r_squared: float
    min_r_squared: float = 0.8

    @property
    def conclusive(self) -> bool:
        return self.r_squared >= self.min_r_squared

    @classmethod
    def header(cls) -> Sequence[str]:
        return ("slope", "intercept", "r_squared", "points", "verdict")

    def as_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": len(self.points),
            "verdict": "conclusive" if self.conclusive else "inconclusive",
        }

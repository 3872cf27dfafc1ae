import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, NoSpacingsError


class IntervalMode(enum.Enum):
    QUANTILE_WINDOW = "quantile_window"
    FULL = "full"
    LOCALIZED = "localized"


class Normalization(enum.Enum):
    HAT = "hat"                # sigma-hat: divide by the number of spacings
    PER_LENGTH = "per_length"  # divide by |I|


@dataclass(frozen=True)
class IntervalSpec:
    """Which spacings enter the statistic: an unfolded window, all of [0, N], or a physical window."""
    mode: IntervalMode
    lower: float = 0.0
    upper: float = 1.0
    center: float = 0.0
    half_length: float = 0.0

    def __post_init__(self):
        if self.mode is IntervalMode.QUANTILE_WINDOW:
            if not 0.0 <= self.lower < self.upper <= 1.0:
                raise DomainError(f"quantile window needs 0 <= lower < upper <= 1, got ({self.lower}, {self.upper})")
        elif self.mode is IntervalMode.LOCALIZED:
            if not self.half_length > 0:
                raise DomainError("localized window needs a positive half length")

    @classmethod
    def full(cls) -> 'IntervalSpec':
        return cls(IntervalMode.FULL)

    @classmethod
    def quantile(cls, lower: float, upper: float) -> 'IntervalSpec':
        return cls(IntervalMode.QUANTILE_WINDOW, lower=lower, upper=upper)

    @classmethod
    def localized(cls, center: float, half_length: float) -> 'IntervalSpec':
        return cls(IntervalMode.LOCALIZED, center=center, half_length=half_length)

    @classmethod
    def centered_window(cls, length: float, n: int) -> 'IntervalSpec':
        """Unfolded window of the given length centered at N/2."""
        if not 0 < length <= n:
            raise DomainError(f"window length {length} must lie in (0, {n}]")
        half = 0.5 * length / n
        return cls.quantile(0.5 - half, 0.5 + half)

    @classmethod
    def parse(cls, text: str) -> 'IntervalSpec':
        """Parse ``full``, ``q:<lo>,<hi>`` or ``loc:<a>,<t>``."""
        text = text.strip()
        if text == "full":
            return cls.full()
        head, _, body = text.partition(":")
        try:
            first, second = (float(v) for v in body.split(","))
        except ValueError:
            raise DomainError(f"Cannot parse interval '{text}'")
        if head == "q":
            return cls.quantile(first, second)
        if head == "loc":
            return cls.localized(first, second)
        raise DomainError(f"Unknown interval mode in '{text}'")

    @property
    def label(self) -> str:
        if self.mode is IntervalMode.FULL:
            return "full"
        if self.mode is IntervalMode.QUANTILE_WINDOW:
            return f"q:{self.lower!r},{self.upper!r}"
        return f"loc:{self.center!r},{self.half_length!r}"

    def as_dict(self):
        return {"mode": self.mode.value, "label": self.label}


@dataclass(frozen=True, eq=False)
class EmpiricalCDF:
    """
    Right-continuous step function with a jump of 1/denominator at each spacing.

    With denominator n this is the normalized spacing distribution; with
    denominator |I| (or R |I| when pooled) it is the per-length spacing measure,
    whose total mass is only approximately 1.
    """
    jumps: np.ndarray
    denominator: float
    normalization: Normalization = Normalization.HAT
    n: int = field(init=False)

    def __post_init__(self):
        arr = np.sort(np.array(self.jumps, dtype=float))
        if arr.size == 0:
            raise NoSpacingsError("Empirical CDF needs at least one spacing")
        if np.any(arr < 0):
            raise DomainError("Spacings must be nonnegative")
        if not (self.denominator > 0 and math.isfinite(self.denominator)):
            raise DomainError("Normalizing denominator must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, 'jumps', arr)
        object.__setattr__(self, 'n', int(arr.size))

    @property
    def total_mass(self) -> float:
        return self.n / self.denominator

    def __call__(self, s):
        counts = np.searchsorted(self.jumps, np.asarray(s, dtype=float), side='right')
        return counts / self.denominator

    def left_limit(self, s):
        counts = np.searchsorted(self.jumps, np.asarray(s, dtype=float), side='left')
        return counts / self.denominator

    def as_dict(self):
        return {
            "n": self.n,
            "denominator": self.denominator,
            "normalization": self.normalization.value,
            "total_mass": self.total_mass,
        }

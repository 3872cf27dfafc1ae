from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..errors import DomainError

TABLE_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class GaudinTable:
    """Gap probability E(s) and Gaudin CDF G(s) on a uniform grid 0..s_max."""
    s_grid: np.ndarray
    e_values: np.ndarray
    g_values: np.ndarray
    order: int
    step: float
    _g: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        for name in ('s_grid', 'e_values', 'g_values'):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.s_grid.size == self.e_values.size == self.g_values.size) or self.s_grid.size < 2:
            raise DomainError("Gaudin table columns must have equal length >= 2")
        if self.s_grid[0] != 0.0:
            raise DomainError("Gaudin table grid must start at s = 0")
        object.__setattr__(self, '_g', PchipInterpolator(self.s_grid, self.g_values, extrapolate=False))

    @property
    def s_max(self) -> float:
        return float(self.s_grid[-1])

    def g_array(self, s) -> np.ndarray:
        """Vectorized G; 1 beyond s_max (sub-Gaussian tail)."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise DomainError("Gaudin CDF is evaluated at s >= 0 only")
        values = self._g(np.minimum(s, self.s_max))
        values = np.clip(values, 0.0, 1.0)
        return np.where(s > self.s_max, 1.0, values)

    def cache_key(self) -> str:
        return f"smax={self.s_max!r} step={self.step!r} m={self.order}"

    def as_dict(self):
        return {
            "s_max": self.s_max,
            "step": self.step,
            "order": self.order,
            "nodes": int(self.s_grid.size),
            "version": TABLE_FORMAT_VERSION,
        }

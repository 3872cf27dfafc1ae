import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..errors import DomainError
from .potential import Potential


@dataclass(frozen=True, eq=False)
class EquilibriumMeasure:
    """
    Equilibrium measure on its support [a, b], tabulated on Chebyshev nodes.

    Node arrays include the endpoints, where the density vanishes and the
    CDF equals 0 and 1. Shape-preserving (PCHIP) interpolation keeps the
    interpolated CDF monotone.
    """
    a: float
    b: float
    density_t: np.ndarray
    density_values: np.ndarray
    cdf_values: np.ndarray
    rescaled_x: np.ndarray
    rescaled_values: np.ndarray
    potential: Optional[Potential] = None
    mass: float = 1.0
    _cdf: PchipInterpolator = field(init=False, repr=False)
    _density: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"Support endpoints out of order: a = {self.a}, b = {self.b}")
        for name in ('density_t', 'density_values', 'cdf_values', 'rescaled_x', 'rescaled_values'):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, '_cdf', PchipInterpolator(self.density_t, self.cdf_values, extrapolate=False))
        object.__setattr__(self, '_density', PchipInterpolator(self.density_t, self.density_values, extrapolate=False))

    # =========================
    # Node views
    # =========================
    @property
    def density_nodes(self) -> np.ndarray:
        return np.column_stack((self.density_t, self.density_values))

    @property
    def cdf_nodes(self) -> np.ndarray:
        return np.column_stack((self.density_t, self.cdf_values))

    @property
    def rescaled_density(self) -> np.ndarray:
        return np.column_stack((self.rescaled_x, self.rescaled_values))

    @property
    def half_width(self) -> float:
        return 0.5 * (self.b - self.a)

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    # =========================
    # Interpolation
    # =========================
    def cdf_array(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inside = np.clip(t, self.a, self.b)
        values = np.clip(self._cdf(inside), 0.0, 1.0)
        values = np.where(t <= self.a, 0.0, values)
        return np.where(t >= self.b, 1.0, values)

    def density_array(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inside = (t > self.a) & (t < self.b)
        values = self._density(np.clip(t, self.a, self.b))
        return np.where(inside, np.maximum(values, 0.0), 0.0)

    def cdf_slope(self, t) -> np.ndarray:
        """Derivative of the interpolated CDF, the Newton slope for inversion."""
        return self._cdf.derivative()(np.clip(np.asarray(t, dtype=float), self.a, self.b))

    def as_dict(self):
        return {
            "a": self.a,
            "b": self.b,
            "nodes": int(self.density_t.size),
            "mass": self.mass,
            "potential": self.potential.as_dict() if self.potential is not None else None,
        }


@dataclass(frozen=True)
class FixedPointReport:
    """Residual history of the damped fixed-point iteration for repulsive systems."""
    iterations: int
    residuals: Tuple[float, ...]
    fit_residual: float
    hull: Tuple[float, float]
    damping: float
    min_second_derivative: float = math.nan

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else 0.0

    def as_dict(self):
        return {
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "fit_residual": self.fit_residual,
            "hull": list(self.hull),
            "damping": self.damping,
            "min_second_derivative": self.min_second_derivative,
        }

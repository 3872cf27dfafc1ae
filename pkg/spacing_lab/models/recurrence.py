from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import DomainError
from .potential import Potential


@dataclass(frozen=True, eq=False)
class RecurrenceTable:
    """
    Three-term recurrence for polynomials orthonormal w.r.t. exp(-N V + f) on J.

    ``alpha[j]`` is the diagonal coefficient a_j (j = 0..n_max-1), ``beta[j]``
    the off-diagonal b_j with ``beta[0] = 0`` (j = 0..n_max). The weight is
    stored shifted by ``log_shift`` (its maximum exponent on the grid) and
    ``shifted_mass`` is the zeroth moment of the shifted weight, so the true
    zeroth moment is ``shifted_mass * exp(log_shift)``.
    """
    n_max: int
    alpha: np.ndarray
    beta: np.ndarray
    shifted_mass: float
    log_shift: float
    v: Potential
    f: Optional[Potential]
    n: int
    support: Tuple[float, float]

    def __post_init__(self):
        if self.alpha.size != self.n_max or self.beta.size != self.n_max + 1:
            raise DomainError("Recurrence arrays do not match n_max")
        for name in ('alpha', 'beta'):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def zeroth_moment(self) -> float:
        return float(self.shifted_mass * np.exp(self.log_shift))

    def log_weight(self, t) -> np.ndarray:
        """-N V(t) + f(t), minus infinity outside J."""
        t = np.asarray(t, dtype=float)
        value = -self.n * self.v(t)
        if self.f is not None:
            value = value + self.f(t)
        return np.where(self.v.contains(t), value, -np.inf)

    def as_dict(self):
        return {
            "n_max": self.n_max,
            "n": self.n,
            "zeroth_moment": self.zeroth_moment,
            "support": list(self.support),
        }

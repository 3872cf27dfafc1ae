import enum
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .potential import Interaction, Potential


class ModelKind(enum.Enum):
    INVARIANT = "invariant"
    REPULSIVE = "repulsive"


@dataclass(frozen=True)
class InvariantModel:
    """Unitary invariant ensemble with weight exp(-N V + f) on J."""
    v: Potential
    f: Optional[Potential] = None
    tag: str = "invariant"

    kind = ModelKind.INVARIANT

    @property
    def domain(self):
        return self.v.lower, self.v.upper

    @property
    def confining(self) -> Potential:
        return self.v

    @property
    def is_gaussian(self) -> bool:
        """True for V(t) = t^2 on the real line with no f, the GUE."""
        return (
            self.f is None
            and self.v.coefficients == (0.0, 0.0, 1.0)
            and not np.isfinite(self.v.lower)
            and not np.isfinite(self.v.upper)
        )

    def single_particle(self, t, n: int):
        """N V(t) - f(t), the one-body part of -log P."""
        value = n * self.v(t)
        if self.f is not None:
            value = value - self.f(t)
        return value

    def pair(self, d):
        return np.zeros_like(np.asarray(d, dtype=float))

    def as_dict(self):
        return {
            "kind": self.kind.value,
            "tag": self.tag,
            "V": self.v.as_dict(),
            "f": self.f.as_dict() if self.f is not None else None,
        }


@dataclass(frozen=True)
class RepulsiveModel:
    """Repulsive particle system: log-gas in Q with extra pair term exp(-h(x_i - x_j))."""
    q: Potential
    h: Interaction
    tag: str = "repulsive"

    kind = ModelKind.REPULSIVE

    @property
    def domain(self):
        return self.q.lower, self.q.upper

    @property
    def confining(self) -> Potential:
        return self.q

    is_gaussian = False

    def single_particle(self, t, n: int):
        return n * self.q(t)

    def pair(self, d):
        return self.h(d)

    def as_dict(self):
        return {
            "kind": self.kind.value,
            "tag": self.tag,
            "Q": self.q.as_dict(),
            "h": self.h.as_dict(),
        }


EnsembleModel = Union[InvariantModel, RepulsiveModel]

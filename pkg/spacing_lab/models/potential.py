import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import DomainError


class PotentialKind(enum.Enum):
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class Potential:
    """
    Polynomial external field V (or f, Q) on the interval J = [lower, upper].

    Coefficients are stored in ascending degree, so ``(0, 0, 1)`` is t^2.
    Infinite bounds mean J is unbounded on that side.
    """
    coefficients: Tuple[float, ...]
    lower: float = -math.inf
    upper: float = math.inf
    kind: PotentialKind = PotentialKind.POLYNOMIAL

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise DomainError("Potential needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError("Potential coefficients must be finite")
        # drop trailing zeros so degree and leading coefficient are meaningful
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, 'coefficients', coeffs)
        if not self.lower < self.upper:
            raise DomainError(f"Empty domain J = [{self.lower}, {self.upper}]")

    # =========================
    # Shape
    # =========================
    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> float:
        return self.coefficients[-1]

    @property
    def is_unbounded(self) -> bool:
        return math.isinf(self.lower) or math.isinf(self.upper)

    @property
    def is_even(self) -> bool:
        return all(c == 0.0 for c in self.coefficients[1::2])

    def contains(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return (t >= self.lower) & (t <= self.upper)

    # =========================
    # Evaluation
    # =========================
    def derivative_coefficients(self, order: int = 1) -> np.ndarray:
        if order == 0:
            return np.asarray(self.coefficients)
        return P.polyder(np.asarray(self.coefficients), order)

    def __call__(self, t, derivative_order: int = 0):
        """Horner evaluation without the domain check (vectorized)."""
        return P.polyval(t, self.derivative_coefficients(derivative_order))

    def plus(self, other_coefficients: Sequence[float]) -> 'Potential':
        return Potential(
            tuple(P.polyadd(self.coefficients, other_coefficients)),
            lower=self.lower,
            upper=self.upper
        )

    def as_dict(self):
        return {
            "kind": self.kind.value,
            "coefficients": list(self.coefficients),
            "domain": [self.lower, self.upper],
            "degree": self.degree,
        }


@dataclass(frozen=True)
class Interaction:
    """Gaussian pair interaction h(t) = gamma * exp(-t^2 / (2 w^2))."""
    gamma: float
    width: float
    form: str = field(default="gaussian")

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise DomainError("Interaction amplitude must be finite")
        if not (self.width > 0 and math.isfinite(self.width)):
            raise DomainError(f"Interaction width must be positive, got {self.width}")

    @property
    def negative_definite(self) -> bool:
        # the Gaussian has a positive Fourier transform, so the sign of gamma decides
        return self.gamma < 0

    @property
    def positive_definite(self) -> bool:
        return self.gamma > 0

    @property
    def vanishes(self) -> bool:
        return self.gamma == 0.0

    def __call__(self, t, derivative_order: int = 0):
        t = np.asarray(t, dtype=float)
        w2 = self.width * self.width
        bump = self.gamma * np.exp(-t * t / (2.0 * w2))
        if derivative_order == 0:
            return bump
        if derivative_order == 1:
            return -t / w2 * bump
        if derivative_order == 2:
            return (t * t / (w2 * w2) - 1.0 / w2) * bump
        raise DomainError(f"Unsupported derivative order {derivative_order}")

    def as_dict(self):
        return {"form": self.form, "gamma": self.gamma, "width": self.width,
                "negative_definite": self.negative_definite}

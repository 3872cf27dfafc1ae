"""
Error types raised by the spacing-lab library.

Every failure the numerical routines can signal is a subclass of
SpacingLabError so the CLI can turn any of them into a clean exit.
"""
from typing import List, Optional


class SpacingLabError(Exception):
    """Base class for all library errors"""


class DomainError(SpacingLabError, ValueError):
    """An argument lies outside the domain an operation is defined on"""


class SolveError(SpacingLabError):
    """Newton iteration for the support endpoints did not converge"""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class DensityNegativeError(SpacingLabError):
    """The rescaled equilibrium density went negative at a node"""


class FixedPointError(SpacingLabError):
    """The damped fixed-point iteration for repulsive systems failed"""

    def __init__(self, message: str, residuals: Optional[List[float]] = None):
        history = residuals or []
        tail = f" (last residual {history[-1]:.3e} after {len(history)} steps)" if history else ""
        super().__init__(message + tail)
        self.residuals = history


class MixingError(SpacingLabError):
    """Metropolis chain stopped accepting moves after adaptation"""


class NumericalError(SpacingLabError):
    """A numerical post-condition (monotonicity, unit mass) was violated"""


class ComplexityError(SpacingLabError):
    """The requested order would make the computation combinatorially large"""


class PrecisionError(SpacingLabError):
    """Floating point precision is insufficient for the requested size"""


class NoSpacingsError(SpacingLabError):
    """No nearest-neighbor spacing falls into the interval"""


class ParseError(SpacingLabError):
    """A model, study or artifact file could not be parsed"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


__all__ = [
    'SpacingLabError', 'DomainError', 'SolveError', 'DensityNegativeError',
    'FixedPointError', 'MixingError', 'NumericalError', 'ComplexityError',
    'PrecisionError', 'NoSpacingsError', 'ParseError'
]

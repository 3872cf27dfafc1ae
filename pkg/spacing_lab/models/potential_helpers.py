"""
Helper functions for evaluating potentials and checking the standing assumptions
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import DomainError
from .potential import Interaction, Potential

logger = logging.getLogger(__name__)

DEFAULT_GRID_RADIUS = 20.0
DEFAULT_GRID_POINTS = 10_000


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the convexity / confinement checks on a validation grid."""
    min_second_derivative: float
    argmin: float
    derivative_increasing: bool
    confined: bool
    clauses: Dict[str, bool]
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        # (2') stands in for (2) only when there is no f, in which case it is present
        convexity = self.clauses.get("2", False) or self.clauses.get("2'", False)
        others = [ok for name, ok in self.clauses.items() if name not in ("2", "2'")]
        return convexity and all(others)

    @property
    def convex(self) -> bool:
        return self.clauses.get("2", False)

    def as_dict(self):
        return {
            "min_second_derivative": self.min_second_derivative,
            "argmin": self.argmin,
            "derivative_increasing": self.derivative_increasing,
            "confined": self.confined,
            "clauses": dict(self.clauses),
            "warnings": list(self.warnings),
            "passed": self.passed,
        }


def eval_potential(p: Potential, t: float, derivative_order: int = 0) -> float:
    """
    Value of V or one of its first two derivatives at t.

    Raises:
        DomainError: t lies outside J or the order is not 0, 1 or 2
    """
    if derivative_order not in (0, 1, 2):
        raise DomainError(f"derivative_order must be 0, 1 or 2, got {derivative_order}")
    if not (p.lower <= t <= p.upper):
        raise DomainError(f"t = {t} outside J = [{p.lower}, {p.upper}]")
    return float(p(t, derivative_order))


def eval_interaction(h: Interaction, t: float, derivative_order: int = 0) -> float:
    if derivative_order not in (0, 1, 2):
        raise DomainError(f"derivative_order must be 0, 1 or 2, got {derivative_order}")
    return float(h(t, derivative_order))


def validation_grid(p: Potential, grid_radius: float, grid_points: int) -> np.ndarray:
    """Uniform grid on J intersected with [-R, R]."""
    lo = max(p.lower, -grid_radius)
    hi = min(p.upper, grid_radius)
    if not lo < hi:
        raise DomainError(f"Validation window [{lo}, {hi}] is empty")
    return np.linspace(lo, hi, grid_points)


def _second_derivative_minimum(p: Potential, grid: np.ndarray):
    """
    Minimum of V'' over the grid, augmented with the real critical points of
    V'' inside the grid window so that isolated zeros are not stepped over.
    """
    candidates = [grid]
    third = p.derivative_coefficients(3)
    if np.any(third != 0.0):
        roots = P.polyroots(third)
        real = roots[np.abs(roots.imag) < 1e-12].real
        inside = real[(real >= grid[0]) & (real <= grid[-1])]
        candidates.append(inside)
    points = np.concatenate(candidates)
    values = p(points, 2)
    idx = int(np.argmin(values))
    return float(values[idx]), float(points[idx])


def _tends_to_infinity(coefficients, lower: float, upper: float) -> bool:
    """Whether the polynomial goes to +inf at every infinite end of J."""
    coeffs = np.trim_zeros(np.asarray(coefficients, dtype=float), 'b')
    if coeffs.size == 0:
        return not (math.isinf(lower) or math.isinf(upper))
    degree = coeffs.size - 1
    lead = coeffs[-1]
    ok = True
    if math.isinf(upper):
        ok = ok and degree >= 1 and lead > 0
    if math.isinf(lower):
        ok = ok and degree >= 1 and lead * (-1) ** degree > 0
    return ok


def _confinement(p: Potential, f: Optional[Potential]) -> bool:
    if not p.is_unbounded:
        return True
    if f is None or f.degree < p.degree:
        return _tends_to_infinity(p.coefficients, p.lower, p.upper)
    if f.degree == p.degree:
        # V - c f with c small keeps the leading behavior of V
        return _tends_to_infinity(p.coefficients, p.lower, p.upper)
    # f dominates: V - c f -> inf needs -f -> inf
    return _tends_to_infinity(-np.asarray(f.coefficients), p.lower, p.upper)


def check_assumptions(p: Potential,
                      grid_radius: float = DEFAULT_GRID_RADIUS,
                      grid_points: int = DEFAULT_GRID_POINTS,
                      f: Optional[Potential] = None) -> AssumptionReport:
    """
    Numerical certificate for the convexity and confinement assumptions.

    Clause "2" is strict convexity (min V'' > 0), clause "2'" is strict
    monotonicity of V' (admissible only when f is absent), clause "3" is
    confinement on unbounded J. Failures are reported, not raised.
    """
    if grid_points < 2:
        raise DomainError("grid_points must be at least 2")

    grid = validation_grid(p, grid_radius, grid_points)
    min_vpp, argmin = _second_derivative_minimum(p, grid)
    first = p(grid, 1)
    increasing = bool(np.all(np.diff(first) > 0))
    confined = bool(_confinement(p, f))

    clauses = {
        "2": bool(min_vpp > 0),
        "3": confined,
    }
    if f is None:
        clauses["2'"] = increasing

    warnings = []
    if f is not None:
        v_norm = float(np.max(np.abs(p(grid))))
        f_norm = float(np.max(np.abs(f(grid))))
        if f_norm > v_norm:
            msg = f"f dominates V on the validation grid (|f| = {f_norm:.3g} > |V| = {v_norm:.3g})"
            logger.warning(msg)
            warnings.append(msg)

    logger.debug(f"Assumption check: min V'' = {min_vpp:.3e} at {argmin:.3f}, clauses {clauses}")
    return AssumptionReport(
        min_second_derivative=min_vpp,
        argmin=argmin,
        derivative_increasing=increasing,
        confined=confined,
        clauses=clauses,
        warnings=warnings
    )


def convex_enough(report: AssumptionReport, has_f: bool) -> bool:
    """Clause (2), or (2') when f is absent."""
    if report.clauses.get("2"):
        return True
    return not has_f and bool(report.clauses.get("2'"))


def check_repulsive_assumptions(q: Potential,
                                h: Interaction,
                                grid_radius: float = DEFAULT_GRID_RADIUS,
                                grid_points: int = DEFAULT_GRID_POINTS) -> AssumptionReport:
    """
    Checks for repulsive systems: Q symmetric and uniformly convex, h symmetric.

    For positive-definite h the sufficient bound alpha_Q > sup(-h'') = gamma / w^2
    is checked as well; for negative-definite h "alpha_Q large enough" has no
    explicit constant and is left to the caller.
    """
    base = check_assumptions(q, grid_radius, grid_points)
    clauses = {
        "symmetric Q": q.is_even,
        "2": base.min_second_derivative > 0,
        "symmetric h": True,
    }
    warnings = list(base.warnings)
    if h.positive_definite:
        bound = h.gamma / (h.width ** 2)
        clauses["alpha_Q > sup(-h'')"] = base.min_second_derivative > bound
    elif h.negative_definite:
        warnings.append(
            f"alpha_Q = {base.min_second_derivative:.4g}; adequacy for negative-definite h is not checked"
        )
    return AssumptionReport(
        min_second_derivative=base.min_second_derivative,
        argmin=base.argmin,
        derivative_increasing=base.derivative_increasing,
        confined=base.confined,
        clauses=clauses,
        warnings=warnings
    )

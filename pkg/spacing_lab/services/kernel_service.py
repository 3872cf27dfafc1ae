import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from ..errors import DomainError, PrecisionError
from ..models.measure import EquilibriumMeasure
from ..models.potential import Potential
from ..models.recurrence import RecurrenceTable
from ..utils.quadrature import gauss_legendre
from .equilibrium_service import EquilibriumService
from .gaudin_service import GaudinService

logger = logging.getLogger(__name__)

# Constants
STIELTJES_POINTS = 4096
KERNEL_MAX_N = 128
EDGE_MARGIN = 0.05
NEGATIVE_DET_LIMIT = 1e-6


class KernelService:
    """Christoffel-Darboux kernel of an invariant ensemble and its sine-kernel limit."""

    @staticmethod
    def working_interval(v: Potential) -> Tuple[float, float]:
        """[a - 1, b + 1] intersected with J."""
        a, b = EquilibriumService.mrs_endpoints(v)
        return max(a - 1.0, v.lower), min(b + 1.0, v.upper)

    @staticmethod
    def recurrence_coefficients(v: Potential,
                                f: Optional[Potential],
                                n: int,
                                n_max: Optional[int] = None,
                                quad_points: int = STIELTJES_POINTS) -> RecurrenceTable:
        """
        Discretized Stieltjes procedure for the weight exp(-N V + f) on a
        Gauss-Legendre grid, with compensated sums.

        Raises:
            PrecisionError: N above the supported cap, or some b_j lost positivity
        """
        n_max = n if n_max is None else n_max
        if n > KERNEL_MAX_N:
            raise PrecisionError(f"N = {n} exceeds the supported maximum {KERNEL_MAX_N} for double precision")
        if not 1 <= n_max <= n:
            raise DomainError(f"n_max must lie in [1, N], got {n_max}")

        lo, hi = KernelService.working_interval(v)
        x, w = gauss_legendre(quad_points, lo, hi)
        exponent = -n * v(x)
        if f is not None:
            exponent = exponent + f(x)
        shift = float(np.max(exponent))
        weight = w * np.exp(exponent - shift)
        mass = math.fsum(weight)

        alpha = np.zeros(n_max)
        beta = np.zeros(n_max + 1)
        p_prev = np.zeros_like(x)
        p = np.full_like(x, 1.0 / math.sqrt(mass))
        for j in range(n_max):
            alpha[j] = math.fsum(weight * x * p * p)
            q = (x - alpha[j]) * p - beta[j] * p_prev
            norm2 = math.fsum(weight * q * q)
            if not (norm2 > 0 and math.isfinite(norm2)):
                raise PrecisionError(f"Recurrence coefficient b_{j + 1} lost positivity; grid too coarse for n_max = {n_max}")
            beta[j + 1] = math.sqrt(norm2)
            p_prev, p = p, q / beta[j + 1]

        logger.debug(f"Stieltjes recurrence: N = {n}, n_max = {n_max}, grid [{lo:.4g}, {hi:.4g}], {quad_points} points")
        return RecurrenceTable(
            n_max=n_max,
            alpha=alpha,
            beta=beta,
            shifted_mass=mass,
            log_shift=shift,
            v=v,
            f=f,
            n=n,
            support=(lo, hi)
        )

    @staticmethod
    def weighted_functions(r: RecurrenceTable, t, count: Optional[int] = None) -> np.ndarray:
        """
        phi_j(t) = p_j(t) exp((-N V(t) + f(t)) / 2) for j < count, stacked on axis 0.
        """
        count = r.n if count is None else count
        if count > r.n_max:
            raise DomainError(f"Recurrence table holds {r.n_max} terms, {count} requested")
        t = np.asarray(t, dtype=float)
        phi = np.empty((count,) + t.shape)
        with np.errstate(over='ignore', invalid='ignore'):
            phi[0] = np.exp(0.5 * (r.log_weight(t) - r.log_shift)) / math.sqrt(r.shifted_mass)
            if count > 1:
                phi[1] = (t - r.alpha[0]) * phi[0] / r.beta[1]
            for j in range(1, count - 1):
                phi[j + 1] = ((t - r.alpha[j]) * phi[j] - r.beta[j] * phi[j - 1]) / r.beta[j + 1]
        if not np.all(np.isfinite(phi)):
            raise PrecisionError("Overflow while evaluating the weighted recurrence")
        return phi

    @staticmethod
    def cd_kernel_eval(r: RecurrenceTable, t, s):
        """K(t, s) = sum_{j < N} phi_j(t) phi_j(s); broadcasts over t and s."""
        t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
        value = np.sum(KernelService.weighted_functions(r, t) * KernelService.weighted_functions(r, s), axis=0)
        return value if value.ndim else float(value)

    @staticmethod
    def kernel_matrix(r: RecurrenceTable, points) -> np.ndarray:
        phi = KernelService.weighted_functions(r, np.asarray(points, dtype=float))
        return phi.T @ phi

    @staticmethod
    def correlation_det(r: RecurrenceTable, points) -> float:
        """
        k-point correlation det[K(t_i, t_j)].

        Raises:
            PrecisionError: the determinant is below -1e-6
        """
        value = float(linalg.det(KernelService.kernel_matrix(r, np.atleast_1d(points))))
        if value < -NEGATIVE_DET_LIMIT:
            raise PrecisionError(f"Correlation determinant is negative ({value:.3e})")
        return max(value, 0.0)

    @staticmethod
    def kernel_trace(r: RecurrenceTable, quad_points: int = 2048) -> float:
        """Integral of K(t, t) over the working interval; equals N for an exact table."""
        x, w = gauss_legendre(quad_points, *r.support)
        return float(np.dot(w, KernelService.cd_kernel_eval(r, x, x)))

    @staticmethod
    def unfolded_kernel_error(r: RecurrenceTable,
                              m: EquilibriumMeasure,
                              interval: Tuple[float, float],
                              grid: int = 64) -> float:
        """
        sup over a grid of unfolded (t, s) in I of
        |K(F^-1(t/N), F^-1(s/N)) / (N mu(F^-1(t/N))) - S(t - s)|.

        Raises:
            DomainError: I comes closer than 0.05 N to 0 or N
        """
        n = r.n
        lo, hi = interval
        if min(lo, n - hi) < EDGE_MARGIN * n or not lo < hi:
            raise DomainError(f"Interval [{lo}, {hi}] must stay {EDGE_MARGIN} N away from 0 and N = {n}")
        unfolded = np.linspace(lo, hi, grid)
        physical = np.array([EquilibriumService.cdf_inverse(m, u / n) for u in unfolded])
        kernel = KernelService.kernel_matrix(r, physical)
        scaled = kernel / (n * m.density_array(physical))[:, None]
        reference = GaudinService.sine_kernel(unfolded[:, None] - unfolded[None, :])
        error = float(np.max(np.abs(scaled - reference)))
        logger.info(f"Unfolded kernel error at N = {n} on [{lo:.4g}, {hi:.4g}]: {error:.4e}")
        return error
